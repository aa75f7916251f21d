#pragma once

#include <stdexcept>
#include <string>

namespace taffin {

struct division_by_zero : std::domain_error {
    explicit division_by_zero(const std::string& what) : std::domain_error(what) {}
};

struct index_out_of_range : std::out_of_range {
    explicit index_out_of_range(const std::string& what) : std::out_of_range(what) {}
};

struct not_simply_laced : std::invalid_argument {
    explicit not_simply_laced(const std::string& what) : std::invalid_argument(what) {}
};

struct not_automorphism : std::invalid_argument {
    explicit not_automorphism(const std::string& what) : std::invalid_argument(what) {}
};

struct cocycle_obstruction : std::domain_error {
    explicit cocycle_obstruction(const std::string& what) : std::domain_error(what) {}
};

struct inexact_division : std::domain_error {
    explicit inexact_division(const std::string& what) : std::domain_error(what) {}
};

struct inapplicable : std::domain_error {
    explicit inapplicable(const std::string& what) : std::domain_error(what) {}
};

struct invariant_violation : std::logic_error {
    explicit invariant_violation(const std::string& what) : std::logic_error(what) {}
};

struct region_mismatch : std::logic_error {
    explicit region_mismatch(const std::string& what) : std::logic_error(what) {}
};

struct degenerate_constants : std::invalid_argument {
    explicit degenerate_constants(const std::string& what) : std::invalid_argument(what) {}
};

struct zero_mode : std::domain_error {
    explicit zero_mode(const std::string& what) : std::domain_error(what) {}
};

struct negative_mode : std::domain_error {
    explicit negative_mode(const std::string& what) : std::domain_error(what) {}
};

struct unsupported_arity : std::invalid_argument {
    explicit unsupported_arity(const std::string& what) : std::invalid_argument(what) {}
};

struct config_parse_error : std::runtime_error {
    explicit config_parse_error(const std::string& what) : std::runtime_error(what) {}
};

struct config_validation_error : std::runtime_error {
    std::string field;
    config_validation_error(std::string field_path, const std::string& what)
        : std::runtime_error(field_path + ": " + what), field(std::move(field_path)) {}
};

}  // namespace taffin
