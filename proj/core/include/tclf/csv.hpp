#ifndef TCLF_CSV_HPP
#define TCLF_CSV_HPP

#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace tclf {

// Minimal comma-delimited reader for the plain numeric/id files this project
// exchanges. Fields are trimmed of surrounding whitespace; quoting and
// embedded commas are not supported.
class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    // Reads one row; returns false at end of input. Blank lines are skipped.
    // line_number() refers to the last row returned (1-based).
    bool next(std::vector<std::string>& fields);

    std::size_t line_number() const { return line_; }

private:
    std::istream& in_;
    std::size_t line_ = 0;
};

std::vector<std::string> split_csv_line(const std::string& line);

// Locale-independent numeric field parsing; empty or malformed -> nullopt.
std::optional<double> parse_double_field(const std::string& field);
std::optional<long long> parse_int_field(const std::string& field);

}  // namespace tclf

#endif
