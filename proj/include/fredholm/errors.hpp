#pragma once

#include <stdexcept>
#include <string>

namespace fredholm {

// Construction / configuration failures.
struct ZeroOnCircle : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptyCoefficients : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IndexOutOfResolution : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnreliableWinding : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct LengthMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical failures.
struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonFinite : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NearSingularPrefactor : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SingularWeight : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct OutOfRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct WindowTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Combinatorial oracle failures.
struct TooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DisagreementError : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace fredholm
