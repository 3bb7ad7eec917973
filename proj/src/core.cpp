#include "adjbai/core.hpp"

#include <algorithm>

namespace adjbai {

int numerical_rank(const Matrix& rows, double rel_tol) {
    if (rows.size() == 0) return 0;
    Eigen::ColPivHouseholderQR<Matrix> qr(rows);
    qr.setThreshold(rel_tol);
    return static_cast<int>(qr.rank());
}

ArmSet::ArmSet(std::vector<Vector> arms) {
    if (arms.empty()) throw InvalidInput("arm set is empty");
    dim_ = static_cast<int>(arms.front().size());
    if (dim_ < 1) throw InvalidInput("arms must have at least one coordinate");
    for (const auto& a : arms) {
        if (a.size() != dim_) throw InvalidInput("arms have inconsistent dimension");
        if (!a.allFinite()) throw InvalidInput("arm coordinates must be finite");
        const bool seen = std::any_of(arms_.begin(), arms_.end(),
                                      [&](const Vector& b) { return b == a; });
        if (seen) {
            ++duplicates_dropped_;
            continue;
        }
        arms_.push_back(a);
    }
    if (arms_.size() < 2) throw InvalidInput("arm set needs at least two distinct arms");
    if (numerical_rank(as_matrix()) < dim_) {
        throw InvalidInput("arms do not span R^" + std::to_string(dim_));
    }
}

ArmSet ArmSet::from_rows(const std::vector<std::vector<double>>& rows) {
    std::vector<Vector> arms;
    arms.reserve(rows.size());
    for (const auto& r : rows) {
        arms.push_back(Eigen::Map<const Vector>(r.data(), static_cast<Eigen::Index>(r.size())));
    }
    return ArmSet(std::move(arms));
}

Matrix ArmSet::as_matrix() const {
    Matrix m(static_cast<Eigen::Index>(arms_.size()), dim_);
    for (std::size_t i = 0; i < arms_.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = arms_[i];
    return m;
}

double ArmSet::max_norm() const {
    double m = 0.0;
    for (const auto& a : arms_) m = std::max(m, a.norm());
    return m;
}

}  // namespace adjbai
