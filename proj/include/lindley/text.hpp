#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace lindley {

namespace text {

/// Whole-string parse; rejects trailing garbage and non-finite values.
std::optional<double> parse_double(std::string_view s);

/// Shortest decimal with at least 12 significant digits that parses back to
/// exactly the same double.
std::string format_real(double v);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);

}  // namespace text

/// A header plus rows of reals, serialized as CSV with `# key=value` comment
/// lines before the header and optional trailing comments after the rows.
class OutputTable {
public:
    explicit OutputTable(std::vector<std::string> header);

    void add_row(std::vector<double> row);
    void add_comment(std::string key, std::string value);
    void add_trailer(std::string key, std::string value);

    const std::vector<std::string>& header() const noexcept { return header_; }
    const std::vector<std::vector<double>>& rows() const noexcept { return rows_; }

    void write_csv(std::ostream& out) const;

    /// Inverse of write_csv. Comments (leading and trailing) are returned in order.
    static OutputTable read_csv(std::istream& in);

    const std::vector<std::pair<std::string, std::string>>& comments() const noexcept {
        return comments_;
    }
    const std::vector<std::pair<std::string, std::string>>& trailers() const noexcept {
        return trailers_;
    }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<double>> rows_;
    std::vector<std::pair<std::string, std::string>> comments_;
    std::vector<std::pair<std::string, std::string>> trailers_;
};

}  // namespace lindley
