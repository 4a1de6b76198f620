#include "infoveil/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>

namespace infoveil {

CsvReader::CsvReader(std::istream& in, std::string source_name)
    : in_(in), source_(std::move(source_name)) {}

void CsvReader::fail(const std::string& message) const {
    raise(ErrorKind::Parse, source_ + ":" + std::to_string(record_line_) + ": " + message);
}

bool CsvReader::next(std::vector<std::string>& fields) {
    fields.clear();
    std::string field;
    bool in_quotes = false;
    bool started = false;

    int c;
    while ((c = in_.get()) != EOF) {
        if (!started) {
            if (c == '\n') { ++line_; continue; }  // skip blank lines
            if (c == '\r') continue;
            started = true;
            record_line_ = line_ + 1;
        }
        if (in_quotes) {
            if (c == '"') {
                if (in_.peek() == '"') { in_.get(); field.push_back('"'); }
                else in_quotes = false;
            } else {
                if (c == '\n') ++line_;
                field.push_back(static_cast<char>(c));
            }
            continue;
        }
        switch (c) {
        case '"':
            if (!field.empty()) fail("unexpected quote inside unquoted field");
            in_quotes = true;
            break;
        case ',':
            fields.push_back(std::move(field));
            field.clear();
            break;
        case '\r':
            break;
        case '\n':
            ++line_;
            fields.push_back(std::move(field));
            return true;
        default:
            field.push_back(static_cast<char>(c));
        }
    }
    if (in_quotes) fail("unterminated quoted field");
    if (started) {
        fields.push_back(std::move(field));
        return true;
    }
    return false;
}

std::vector<std::string> split_unquoted(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) { out.push_back(cur); cur.clear(); }
        else cur.push_back(c);
    }
    out.push_back(cur);
    return out;
}

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string csv_quote(const std::string& field) {
    bool needs = field.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void atomic_write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) raise(ErrorKind::Io, "cannot open '" + tmp + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) raise(ErrorKind::Io, "write failed on '" + tmp + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) raise(ErrorKind::Io, "rename '" + tmp + "' -> '" + path + "': " + ec.message());
}

double parse_value(const std::string& text,
                   const std::function<void(const std::string&)>& onerror) {
    const char* begin = text.c_str();
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || errno == ERANGE || !std::isfinite(v))
        onerror("expected a finite number, got '" + text + "'");
    return v;
}

DailySeries read_series_csv(const std::string& path, const std::string& label, bool fill_zero,
                            const std::optional<std::string>& column) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorKind::Io, "cannot open '" + path + "'");
    CsvReader reader(in, path);

    std::vector<std::string> fields;
    if (!reader.next(fields)) raise(ErrorKind::Parse, path + ": empty file");
    if (fields.empty() || fields[0] != "date")
        reader.fail("expected header starting with 'date'");

    std::size_t value_col = 1;
    if (column) {
        bool found = false;
        for (std::size_t i = 1; i < fields.size(); ++i)
            if (fields[i] == *column) { value_col = i; found = true; break; }
        if (!found) raise(ErrorKind::Lookup, path + ": no column named '" + *column + "'");
    } else if (fields.size() != 2 || fields[1] != "value") {
        reader.fail("expected header 'date,value'");
    }

    std::vector<double> values;
    Date start;
    Date prev;
    bool first = true;
    while (reader.next(fields)) {
        if (fields.size() <= value_col)
            reader.fail("expected at least " + std::to_string(value_col + 1) + " columns, got " +
                        std::to_string(fields.size()));
        Date d;
        try {
            d = Date::parse(fields[0]);
        } catch (const Error& e) {
            reader.fail(std::string("column 1: ") + e.what());
        }
        const double v =
            parse_value(fields[value_col], [&](const std::string& m) {
                reader.fail("column " + std::to_string(value_col + 1) + ": " + m);
            });
        if (first) {
            start = d;
            first = false;
        } else {
            if (d <= prev) reader.fail("dates must be strictly ascending");
            const auto gap = d - prev;
            if (gap > 1) {
                if (!fill_zero)
                    reader.fail("gap before " + d.to_string() +
                                " (missing " + std::to_string(gap - 1) +
                                " day(s); pass fill-zero to insert zeros)");
                for (std::int64_t i = 1; i < gap; ++i) values.push_back(0.0);
            }
        }
        values.push_back(v);
        prev = d;
    }
    if (values.empty()) raise(ErrorKind::Parse, path + ": no data rows");
    return DailySeries(start, std::move(values), label);
}

void write_series_csv(const std::string& path, const DailySeries& series) {
    std::string out = "date,value\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out += series.date_at(i).to_string();
        out.push_back(',');
        out += format_value(series.values[i]);
        out.push_back('\n');
    }
    atomic_write_file(path, out);
}

} // namespace infoveil
