#pragma once

#include <stdexcept>
#include <string>

namespace apo {

// Every failure mode the library can report. The CLI maps these onto its
// exit-code contract; tests match on the code rather than message text.
enum class Errc {
    invalid_argument,
    imaginary_circle,
    coincident_points,
    collinear_points,
    parallel_lines,
    center_has_no_image,
    dimension_mismatch,
    concentric_input,
    nested_input,
    duplicate_circle,
    coincident_centers,
    parallel_loci,
    degenerate_scene,
    infeasible_shrink,
    no_feasible_m2,
    tangent_radius_nonpositive,
    center_on_object,
    degenerate_linear_system,
    empty_solution_set,
    empty_render,
    io_failure,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace apo
