#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sitesel/errors.hpp"
#include "sitesel/geo.hpp"

namespace sitesel {

/// Number of times a respondent visited the location they nominated.
enum class FrequencyCategory { OneToThree, FourToSix, SevenToNine, TenOrMore };

/// Coding table: 1-3 visits -> 1, 4-6 -> 2, 7-9 -> 3, 10 or more -> 4.
constexpr int frequency_weight(FrequencyCategory cat) {
    switch (cat) {
        case FrequencyCategory::OneToThree: return 1;
        case FrequencyCategory::FourToSix: return 2;
        case FrequencyCategory::SevenToNine: return 3;
        case FrequencyCategory::TenOrMore: return 4;
    }
    return 1;
}

constexpr std::string_view category_label(FrequencyCategory cat) {
    switch (cat) {
        case FrequencyCategory::OneToThree: return "1 to 3";
        case FrequencyCategory::FourToSix: return "4 to 6";
        case FrequencyCategory::SevenToNine: return "7 to 9";
        case FrequencyCategory::TenOrMore: return "10 or more";
    }
    return "1 to 3";
}

namespace detail {

inline std::string squeeze_lower(std::string_view s) {
    std::string out;
    bool space = false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            space = !out.empty();
            continue;
        }
        if (space) out.push_back(' ');
        space = false;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

}  // namespace detail

/// Accepts the questionnaire strings ("1 to 3", "10 or more", optionally followed by "times").
inline std::optional<FrequencyCategory> parse_frequency_category(std::string_view token) {
    std::string t = detail::squeeze_lower(token);
    if (t.ends_with(" times")) t.resize(t.size() - 6);
    if (t == "1 to 3") return FrequencyCategory::OneToThree;
    if (t == "4 to 6") return FrequencyCategory::FourToSix;
    if (t == "7 to 9") return FrequencyCategory::SevenToNine;
    if (t == "10 or more") return FrequencyCategory::TenOrMore;
    return std::nullopt;
}

/// Logistic function, evaluated so that exp() never overflows.
inline double sigmoid(double u) {
    if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
    const double e = std::exp(u);
    return e / (1.0 + e);
}

namespace detail {

inline double frequency_duration_product(int f, double t_min) {
    if (f < 1 || f > 4) {
        std::ostringstream os;
        os << "frequency weight must be in {1, 2, 3, 4}, got " << f;
        throw ValidationError(os.str());
    }
    if (!std::isfinite(t_min) || t_min < 0.0) {
        std::ostringstream os;
        os << "average visit duration must be finite and non-negative, got " << t_min;
        throw ValidationError(os.str());
    }
    return static_cast<double>(f) * t_min;
}

}  // namespace detail

/// w = sigmoid(f * t). Lies in [0.5, 1); saturates to 1.0 in double precision for f*t >~ 37.
inline double reliability_weight(int f, double t_min) {
    return sigmoid(detail::frequency_duration_product(f, t_min));
}

/// 1 - w computed directly, so it stays representable long after w has rounded to 1.
inline double reliability_complement(int f, double t_min) {
    return sigmoid(-detail::frequency_duration_product(f, t_min));
}

/// Area under the ascending weight curve, with sorted weights placed at x = i/(n-1) on
/// [0, 1] and integrated by the trapezoid rule. A single weight is its own area.
inline double reliability_auc(std::span<const double> weights) {
    if (weights.empty()) throw ValidationError("reliability_auc: weight list is empty");
    for (double w : weights) {
        if (!(w >= 0.0 && w <= 1.0)) {
            std::ostringstream os;
            os << "reliability_auc: weight outside [0, 1]: " << w;
            throw ValidationError(os.str());
        }
    }
    if (weights.size() == 1) return weights.front();

    std::vector<double> sorted(weights.begin(), weights.end());
    std::sort(sorted.begin(), sorted.end());
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) area += sorted[i] + sorted[i + 1];
    return area / (2.0 * static_cast<double>(sorted.size() - 1));
}

/// A location vote with its reliability weight. `source_index` points back into the
/// response list it was built from.
struct WeightedPoint {
    GeoPoint point;
    double weight = 1.0;
    std::size_t source_index = 0;
};

}  // namespace sitesel
