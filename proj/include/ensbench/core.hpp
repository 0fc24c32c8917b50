#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace ensbench {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Immutable trained model exposing the prediction contract shared by every
/// base regressor and ensemble in the toolkit.
class FittedRegressor {
public:
    virtual ~FittedRegressor() = default;

    /// Predict one value per row. Throws std::invalid_argument on a feature
    /// count mismatch.
    virtual Vector predict(const Matrix& features) const = 0;

    /// Number of features the model was trained on.
    virtual int n_features() const = 0;
};

inline void check_predict_width(int trained, Eigen::Index got) {
    if (got != trained) {
        throw std::invalid_argument("feature count mismatch: model trained on " +
                                    std::to_string(trained) + " features, got " +
                                    std::to_string(got));
    }
}

// splitmix64; used to derive independent per-cell / per-member seeds so
// results do not depend on scheduling.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a) {
    return mix_seed(base ^ mix_seed(a));
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    return derive_seed(derive_seed(base, a), b);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                                 std::uint64_t c) {
    return derive_seed(derive_seed(base, a, b), c);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                                 std::uint64_t c, std::uint64_t d) {
    return derive_seed(derive_seed(base, a, b, c), d);
}

}  // namespace ensbench
