#include "lindley/text.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>

#include "lindley/error.hpp"

namespace lindley {

namespace text {

std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (s.empty()) {
        return std::nullopt;
    }
    if (s.front() == '+') {
        s.remove_prefix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

std::string format_real(double v) {
    char buf[40];
    for (int precision = 12; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) {
            break;
        }
    }
    return buf;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

}  // namespace text

OutputTable::OutputTable(std::vector<std::string> header) : header_(std::move(header)) {
    if (header_.empty()) {
        throw DomainError("OutputTable: header must not be empty");
    }
}

void OutputTable::add_row(std::vector<double> row) {
    if (row.size() != header_.size()) {
        throw DomainError("OutputTable: row arity does not match header");
    }
    rows_.push_back(std::move(row));
}

void OutputTable::add_comment(std::string key, std::string value) {
    comments_.emplace_back(std::move(key), std::move(value));
}

void OutputTable::add_trailer(std::string key, std::string value) {
    trailers_.emplace_back(std::move(key), std::move(value));
}

void OutputTable::write_csv(std::ostream& out) const {
    for (const auto& [key, value] : comments_) {
        out << "# " << key << '=' << value << '\n';
    }
    for (std::size_t i = 0; i < header_.size(); ++i) {
        out << (i ? "," : "") << header_[i];
    }
    out << '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << text::format_real(row[i]);
        }
        out << '\n';
    }
    for (const auto& [key, value] : trailers_) {
        out << "# " << key << ' ' << value << '\n';
    }
}

OutputTable OutputTable::read_csv(std::istream& in) {
    std::vector<std::pair<std::string, std::string>> comments;
    std::vector<std::pair<std::string, std::string>> trailers;
    std::optional<OutputTable> table;
    std::string line;

    while (std::getline(in, line)) {
        const auto trimmed = text::trim(line);
        if (trimmed.empty()) {
            continue;
        }
        if (trimmed.front() == '#') {
            auto body = text::trim(trimmed.substr(1));
            // Leading comments are key=value, trailers are "key rest".
            const auto sep = table ? body.find(' ') : body.find('=');
            std::pair<std::string, std::string> kv{std::string(body), ""};
            if (sep != std::string_view::npos) {
                kv = {std::string(body.substr(0, sep)), std::string(body.substr(sep + 1))};
            }
            (table ? trailers : comments).push_back(std::move(kv));
            continue;
        }
        const auto fields = text::split(trimmed, ',');
        if (!table) {
            std::vector<std::string> header;
            for (auto f : fields) {
                header.emplace_back(text::trim(f));
            }
            table.emplace(std::move(header));
            continue;
        }
        std::vector<double> row;
        for (auto f : fields) {
            const auto v = text::parse_double(f);
            if (!v) {
                throw DomainError("OutputTable: cannot parse '" + std::string(f) + "'");
            }
            row.push_back(*v);
        }
        table->add_row(std::move(row));
    }
    if (!table) {
        throw DomainError("OutputTable: missing header row");
    }
    table->comments_ = std::move(comments);
    table->trailers_ = std::move(trailers);
    return std::move(*table);
}

}  // namespace lindley
