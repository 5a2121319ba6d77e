#include "csv.hpp"

#include <charconv>
#include <cmath>

#include "alphaeff/errors.hpp"

namespace alphaeff::detail {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(std::string_view line,
                                      std::size_t line_no) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (true) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t'))
      ++i;
    std::string field;
    if (i < line.size() && line[i] == '"') {
      ++i;
      bool closed = false;
      while (i < line.size()) {
        if (line[i] == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            field.push_back('"');
            i += 2;
            continue;
          }
          closed = true;
          ++i;
          break;
        }
        field.push_back(line[i++]);
      }
      if (!closed)
        throw ParseError("unterminated quoted field", line_no);
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t'))
        ++i;
      if (i < line.size() && line[i] != ',')
        throw ParseError("unexpected text after quoted field", line_no);
    } else {
      const auto comma = line.find(',', i);
      const auto end = comma == std::string_view::npos ? line.size() : comma;
      field = std::string(trim(line.substr(i, end - i)));
      i = end;
    }
    out.push_back(std::move(field));
    if (i >= line.size())
      break;
    ++i; // skip ','
  }
  return out;
}

} // namespace

CsvDocument read_csv(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF"))
    text.remove_prefix(3);

  CsvDocument doc;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos)
      nl = text.size();
    const auto raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;

    const auto line = trim(raw);
    if (line.empty())
      continue;
    if (line.front() == '#') {
      doc.comments.emplace_back(trim(line.substr(1)));
      continue;
    }
    auto fields = split_fields(line, line_no);
    if (!doc.has_header) {
      if (fields.size() < 4 || fields[0] != "label" || fields[1] != "k" ||
          fields[2] != "value" || fields[3] != "kind")
        throw ParseError("expected header 'label,k,value,kind'", line_no);
      doc.has_header = true;
      continue;
    }
    if (fields.size() < 4)
      throw ParseError("expected 4 fields (label,k,value,kind), got " +
                           std::to_string(fields.size()),
                       line_no);
    doc.rows.push_back({line_no, std::move(fields)});
  }
  return doc;
}

std::string csv_field(std::string_view value) {
  const bool needs_quotes =
      value.find_first_of(",\"\n") != std::string_view::npos ||
      (!value.empty() && (value.front() == ' ' || value.back() == ' ' ||
                          value.front() == '#'));
  if (!needs_quotes)
    return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"')
      out += "\"\"";
    else
      out.push_back(c);
  }
  out.push_back('"');
  return out;
}

int parse_int_field(const std::string &text, std::size_t line,
                    const char *what) {
  int v = 0;
  const auto *end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || p != end)
    throw ParseError(std::string("invalid ") + what + " '" + text + "'", line);
  return v;
}

double parse_double_field(const std::string &text, std::size_t line,
                          const char *what) {
  double v = 0.0;
  const auto *begin = text.data();
  const auto *end = text.data() + text.size();
  if (begin != end && *begin == '+')
    ++begin;
  const auto [p, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || p != end || !std::isfinite(v))
    throw ParseError(std::string("invalid ") + what + " '" + text + "'", line);
  return v;
}

} // namespace alphaeff::detail
