#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sitesel/errors.hpp"
#include "sitesel/geo.hpp"
#include "sitesel/weighting.hpp"

namespace sitesel {

/// Perceptual quadrants, lettered A-D in this order.
enum class Quadrant { FullOfLifeExciting, ChaoticRestless, CalmTranquil, LifelessBoring };

inline constexpr std::array<Quadrant, 4> kAllQuadrants{Quadrant::FullOfLifeExciting, Quadrant::ChaoticRestless,
                                                       Quadrant::CalmTranquil, Quadrant::LifelessBoring};

constexpr char quadrant_letter(Quadrant q) { return static_cast<char>('A' + static_cast<int>(q)); }

constexpr std::string_view quadrant_name(Quadrant q) {
    switch (q) {
        case Quadrant::FullOfLifeExciting: return "FullOfLifeExciting";
        case Quadrant::ChaoticRestless: return "ChaoticRestless";
        case Quadrant::CalmTranquil: return "CalmTranquil";
        case Quadrant::LifelessBoring: return "LifelessBoring";
    }
    return "FullOfLifeExciting";
}

/// Accepts a letter A-D, a canonical name ("CalmTranquil") or the descriptor phrase
/// ("calm and tranquil"), case-insensitively.
inline std::optional<Quadrant> parse_quadrant(std::string_view token) {
    const std::string t = detail::squeeze_lower(token);
    static constexpr std::array<std::string_view, 4> phrases{"full of life and exciting", "chaotic and restless",
                                                             "calm and tranquil", "lifeless and boring"};
    for (Quadrant q : kAllQuadrants) {
        const auto i = static_cast<std::size_t>(q);
        std::string name = detail::squeeze_lower(quadrant_name(q));
        if (t.size() == 1 && t[0] == static_cast<char>('a' + i)) return q;
        if (t == name || t == phrases[i]) return q;
    }
    return std::nullopt;
}

/// One participant vote.
struct SurveyResponse {
    std::string participant_id;
    Quadrant quadrant = Quadrant::FullOfLifeExciting;
    std::string region;
    double lat_deg = 0.0;
    /// Normalized into (-180, 180].
    double lon_deg = 0.0;
    FrequencyCategory visit_count_category = FrequencyCategory::OneToThree;
    double avg_duration_min = 0.0;
    /// Collected but never used by the pipeline.
    std::string cadence;
    std::string rationale;
    /// 1-based line of the record in the source file (the header is line 1).
    std::size_t source_row = 0;

    GeoPoint point() const { return from_degrees(lat_deg, lon_deg); }
};

// ---------------------------------------------------------------------------------------
// CSV

struct CsvRecord {
    std::vector<std::string> fields;
    std::size_t line = 0;
};

/// RFC 4180 reader: quoted fields, doubled quotes, embedded newlines, CRLF, UTF-8 BOM.
/// Blank lines are dropped. Throws ParseError on an unterminated quote.
inline std::vector<CsvRecord> read_csv(std::string_view text) {
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

    std::vector<CsvRecord> records;
    CsvRecord current;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    std::size_t line = 1;
    current.line = 1;

    auto end_field = [&] {
        current.fields.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        const bool blank = current.fields.size() == 1 && current.fields[0].empty();
        if (!blank) records.push_back(std::move(current));
        current = CsvRecord{};
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                if (!field_started) in_quotes = true;
                else field.push_back(c);
                field_started = true;
                break;
            case ',':
                end_field();
                break;
            case '\r':
                break;
            case '\n':
                end_record();
                ++line;
                current.line = line;
                break;
            default:
                field.push_back(c);
                field_started = true;
        }
    }
    if (in_quotes) {
        std::ostringstream os;
        os << "unterminated quoted field in record starting at line " << current.line;
        throw ParseError(os.str());
    }
    if (field_started || !field.empty() || !current.fields.empty()) end_record();
    return records;
}

/// Quotes a field when it holds a comma, quote or newline.
inline std::string csv_escape(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

// ---------------------------------------------------------------------------------------
// Column mapping

/// Canonical input fields. The last two are optional.
inline constexpr std::array<std::string_view, 9> kSurveyFields{
    "participant_id",       "quadrant",         "region", "latitude_deg", "longitude_deg",
    "visit_count_category", "avg_duration_min", "cadence", "rationale"};
inline constexpr std::size_t kRequiredSurveyFields = 7;

/// Canonical field name -> header name used by a particular file. Unmapped fields use
/// their canonical name.
struct ColumnMap {
    std::map<std::string, std::string, std::less<>> header_for;

    std::string header(std::string_view field) const {
        auto it = header_for.find(field);
        return it == header_for.end() ? std::string(field) : it->second;
    }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace detail

/// Reads `field = Header Name` lines. '#' starts a comment.
inline ColumnMap parse_column_map(std::string_view text) {
    ColumnMap map;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            std::ostringstream os;
            os << "column map line " << line_no << ": expected key=value";
            throw ConfigError(os.str());
        }
        const std::string_view key = detail::trim(line.substr(0, eq));
        const std::string_view value = detail::trim(line.substr(eq + 1));
        bool known = false;
        for (auto f : kSurveyFields) known = known || f == key;
        if (!known) {
            std::ostringstream os;
            os << "column map line " << line_no << ": unknown field '" << key << "'";
            throw ConfigError(os.str());
        }
        map.header_for[std::string(key)] = std::string(value);
    }
    return map;
}

// ---------------------------------------------------------------------------------------
// Parsing

struct ParseDiagnostic {
    std::size_t row = 0;
    std::string column;
    std::string message;
};

struct ParseOptions {
    /// Any diagnostic aborts the parse with ParseError instead of skipping the row.
    bool strict = false;
    ColumnMap columns;
};

struct ParseResult {
    std::vector<SurveyResponse> responses;
    std::vector<ParseDiagnostic> diagnostics;
    std::size_t data_rows = 0;
    std::size_t skipped_rows = 0;
};

inline std::string format_diagnostic(const ParseDiagnostic& d) {
    std::ostringstream os;
    os << "row " << d.row << ", column '" << d.column << "': " << d.message;
    return os.str();
}

namespace detail {

inline std::optional<double> parse_real(std::string_view s) {
    s = trim(s);
    if (s.starts_with('+')) s.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

}  // namespace detail

/// Parses survey CSV. The header row is required; columns are located by name through
/// `options.columns`. Rows with problems produce one diagnostic per bad column and are
/// skipped, unless `options.strict` is set.
inline ParseResult parse_responses(std::string_view csv, const ParseOptions& options = {}) {
    const auto records = read_csv(csv);
    ParseResult out;
    if (records.empty()) throw ParseError("input has no header row");

    const auto& header = records.front().fields;
    std::array<std::optional<std::size_t>, kSurveyFields.size()> col{};
    for (std::size_t f = 0; f < kSurveyFields.size(); ++f) {
        const std::string want = options.columns.header(kSurveyFields[f]);
        for (std::size_t c = 0; c < header.size(); ++c)
            if (detail::trim(header[c]) == want) col[f] = c;
        if (f < kRequiredSurveyFields && !col[f]) {
            throw ParseError("missing required column '" + want + "' (field " + std::string(kSurveyFields[f]) + ")");
        }
    }

    for (std::size_t r = 1; r < records.size(); ++r) {
        const CsvRecord& rec = records[r];
        ++out.data_rows;
        const std::size_t before = out.diagnostics.size();
        auto diag = [&](std::size_t field, std::string message) {
            out.diagnostics.push_back(
                ParseDiagnostic{rec.line, options.columns.header(kSurveyFields[field]), std::move(message)});
        };
        auto cell = [&](std::size_t field) -> std::string_view {
            if (!col[field] || *col[field] >= rec.fields.size()) return {};
            return detail::trim(rec.fields[*col[field]]);
        };

        SurveyResponse resp;
        resp.source_row = rec.line;
        resp.participant_id = std::string(cell(0));
        resp.region = std::string(cell(2));
        resp.cadence = std::string(cell(7));
        resp.rationale = std::string(cell(8));

        if (auto q = parse_quadrant(cell(1))) resp.quadrant = *q;
        else diag(1, "unknown quadrant '" + std::string(cell(1)) + "'");

        const auto lat = detail::parse_real(cell(3));
        if (!lat) diag(3, "not a number: '" + std::string(cell(3)) + "'");
        else if (!std::isfinite(*lat) || std::abs(*lat) > 90.0) {
            std::ostringstream os;
            os.precision(17);
            os << "latitude out of range [-90, 90]: " << *lat;
            diag(3, os.str());
        } else resp.lat_deg = *lat;

        const auto lon = detail::parse_real(cell(4));
        if (!lon) diag(4, "not a number: '" + std::string(cell(4)) + "'");
        else if (!std::isfinite(*lon)) diag(4, "longitude is not finite");
        else resp.lon_deg = normalize_longitude_deg(*lon);

        if (auto cat = parse_frequency_category(cell(5))) resp.visit_count_category = *cat;
        else diag(5, "unknown visit count category '" + std::string(cell(5)) + "'");

        const auto t = detail::parse_real(cell(6));
        if (!t) diag(6, "not a number: '" + std::string(cell(6)) + "'");
        else if (!std::isfinite(*t) || *t < 0.0) {
            std::ostringstream os;
            os << "duration must be finite and non-negative, got " << *t;
            diag(6, os.str());
        } else resp.avg_duration_min = *t;

        if (out.diagnostics.size() != before) {
            if (options.strict) throw ParseError(format_diagnostic(out.diagnostics[before]));
            ++out.skipped_rows;
            continue;
        }
        out.responses.push_back(std::move(resp));
    }
    return out;
}

/// Weighted points for one quadrant; `source_index` indexes `responses`.
inline std::vector<WeightedPoint> build_weighted_points(std::span<const SurveyResponse> responses, Quadrant quadrant) {
    std::vector<WeightedPoint> out;
    for (std::size_t i = 0; i < responses.size(); ++i) {
        const auto& r = responses[i];
        if (r.quadrant != quadrant) continue;
        out.push_back(WeightedPoint{r.point(), reliability_weight(frequency_weight(r.visit_count_category),
                                                                  r.avg_duration_min),
                                    i});
    }
    return out;
}

}  // namespace sitesel
