#pragma once

#include <stdexcept>
#include <string>

namespace gorlab {

// Everything thrown on bad input or an unusable window derives from InputError
// (CLI exit code 1).  AssertionError is reserved for violated cross-checks the
// library promises to enforce, e.g. two independent routes disagreeing (exit
// code 2): reaching one means a bug, never a property of the input.
struct Error : std::runtime_error {
    explicit Error(const std::string& m) : std::runtime_error(m) {}
};

struct InputError : Error {
    explicit InputError(const std::string& m) : Error(m) {}
};

struct AssertionError : Error {
    explicit AssertionError(const std::string& m) : Error(m) {}
};

#define GORLAB_DEFINE_ERROR(Name, Base)                      \
    struct Name : Base {                                     \
        explicit Name(const std::string& m) : Base(#Name ": " + m) {} \
    }

GORLAB_DEFINE_ERROR(WindowExceeded, InputError);
GORLAB_DEFINE_ERROR(NotASubspace, InputError);
GORLAB_DEFINE_ERROR(MixedAlgebras, InputError);
GORLAB_DEFINE_ERROR(NotFiniteDimensional, InputError);
GORLAB_DEFINE_ERROR(NotBoundedBelow, InputError);
GORLAB_DEFINE_ERROR(NotConnected, InputError);
GORLAB_DEFINE_ERROR(NotSimplyConnected, InputError);
GORLAB_DEFINE_ERROR(NotMinimal, InputError);
GORLAB_DEFINE_ERROR(NotFiniteFiberCohomology, InputError);
GORLAB_DEFINE_ERROR(HypothesisUnverifiable, InputError);
GORLAB_DEFINE_ERROR(SolveFailed, InputError);
GORLAB_DEFINE_ERROR(StabilityFailed, InputError);
GORLAB_DEFINE_ERROR(ParseError, InputError);
GORLAB_DEFINE_ERROR(RouteMismatch, AssertionError);

#undef GORLAB_DEFINE_ERROR

}  // namespace gorlab
