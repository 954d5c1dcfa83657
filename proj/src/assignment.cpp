#include <cmath>
#include <limits>

#include "ph/transport.hpp"

namespace ph {

double ground_distance(double x1, double y1, double x2, double y2, double q) {
    const double dx = std::abs(x1 - x2), dy = std::abs(y1 - y2);
    if (std::isinf(q)) return std::max(dx, dy);
    if (q == 1.0) return dx + dy;
    if (q == 2.0) return std::sqrt(dx * dx + dy * dy);
    return std::pow(std::pow(dx, q) + std::pow(dy, q), 1.0 / q);
}

// shortest augmenting path assignment with dual potentials; O(n^3), deterministic
// tie-breaking by scan order
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost) {
    const int n = static_cast<int>(cost.rows());
    if (cost.cols() != n) throw ArgumentError("solve_assignment: matrix must be square");
    constexpr double kInf = std::numeric_limits<double>::infinity();

    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<int> match(n + 1, 0), way(n + 1, 0);  // match[j] = row on column j, 1-based

    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = match[j0];
            int j1 = 0;
            double delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            if (j1 == 0)
                throw ArgumentError("solve_assignment: problem is infeasible (a row has "
                                    "no finite-cost column left)");
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0);
    }

    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j)
        if (match[j] > 0) row_to_col[match[j] - 1] = j - 1;
    return row_to_col;
}

}  // namespace ph
