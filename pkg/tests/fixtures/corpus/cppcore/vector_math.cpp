#include <cmath>
#include <stdexcept>
#include <vector>

namespace geom {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("size mismatch");
    }
    double sum = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        sum += a[i] * b[i];
    }
    return sum;
}

double norm(const std::vector<double>& v) {
    return std::sqrt(dot(v, v));
}

std::vector<double> normalize(const std::vector<double>& v) {
    double n = norm(v);
    std::vector<double> out(v.size());
    if (n == 0.0) {
        return out;
    }
    for (size_t i = 0; i < v.size(); ++i) {
        out[i] = v[i] / n;
    }
    return out;
}

}  // namespace geom
