#include "bikegen/labels.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bikegen {

namespace {

void append_fields(std::string& out, int class_id, const BBox2D& box, double ry_u,
                   double rz_u) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%d %.6f %.6f %.6f %.6f %.6f %.6f", class_id, box.cx,
                box.cy, box.w, box.h, ry_u, rz_u);
  out += buf;
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& tok, const std::string& origin, int line) {
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size() || !std::isfinite(v)) {
    fail(origin, line, "bad number '" + tok + "'");
  }
  return v;
}

double parse_unit(const std::string& tok, const char* what, const std::string& origin,
                  int line) {
  const double v = parse_double(tok, origin, line);
  if (v < 0.0 || v > 1.0) {
    fail(origin, line, std::string(what) + " outside [0, 1]: " + tok);
  }
  return v;
}

int parse_class(const std::string& tok, const std::string& origin, int line) {
  int v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
    fail(origin, line, "bad class id '" + tok + "'");
  }
  if (v < 0 || v > 2) fail(origin, line, "class id outside {0, 1, 2}: " + tok);
  return v;
}

template <typename Fn>
void for_each_row(const std::string& text, const std::string& origin, std::size_t fields,
                  Fn&& fn) {
  std::istringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks.size() != fields) {
      fail(origin, lineno,
           "expected " + std::to_string(fields) + " columns, got " +
               std::to_string(toks.size()));
    }
    fn(toks, lineno);
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spill(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

std::string format_truth(const std::vector<AnnotationRecord>& records) {
  std::string out;
  for (const AnnotationRecord& r : records) {
    append_fields(out, r.class_id, r.box, r.ry_u, r.rz_u);
    out += '\n';
  }
  return out;
}

std::string format_predictions(const std::vector<PredictionRecord>& records) {
  std::string out;
  for (const PredictionRecord& r : records) {
    append_fields(out, r.class_id, r.box, r.ry_u, r.rz_u);
    char buf[32];
    std::snprintf(buf, sizeof(buf), " %.6f", r.confidence);
    out += buf;
    out += '\n';
  }
  return out;
}

std::vector<AnnotationRecord> parse_truth(const std::string& text,
                                          const std::string& origin) {
  std::vector<AnnotationRecord> records;
  for_each_row(text, origin, 7, [&](const std::vector<std::string>& t, int line) {
    AnnotationRecord r;
    r.class_id = parse_class(t[0], origin, line);
    r.box.cx = parse_unit(t[1], "cx", origin, line);
    r.box.cy = parse_unit(t[2], "cy", origin, line);
    r.box.w = parse_unit(t[3], "w", origin, line);
    r.box.h = parse_unit(t[4], "h", origin, line);
    r.ry_u = parse_unit(t[5], "ry_u", origin, line);
    r.rz_u = parse_unit(t[6], "rz_u", origin, line);
    records.push_back(r);
  });
  return records;
}

std::vector<PredictionRecord> parse_predictions(const std::string& text,
                                                const std::string& origin) {
  std::vector<PredictionRecord> records;
  for_each_row(text, origin, 8, [&](const std::vector<std::string>& t, int line) {
    PredictionRecord r;
    r.class_id = parse_class(t[0], origin, line);
    r.box.cx = parse_unit(t[1], "cx", origin, line);
    r.box.cy = parse_unit(t[2], "cy", origin, line);
    r.box.w = parse_unit(t[3], "w", origin, line);
    r.box.h = parse_unit(t[4], "h", origin, line);
    r.ry_u = parse_unit(t[5], "ry_u", origin, line);
    r.rz_u = parse_unit(t[6], "rz_u", origin, line);
    r.confidence = parse_unit(t[7], "confidence", origin, line);
    records.push_back(r);
  });
  return records;
}

void write_truth_file(const std::vector<AnnotationRecord>& records,
                      const std::string& path) {
  spill(format_truth(records), path);
}

std::vector<AnnotationRecord> read_truth_file(const std::string& path) {
  return parse_truth(slurp(path), path);
}

void write_predictions_file(const std::vector<PredictionRecord>& records,
                            const std::string& path) {
  spill(format_predictions(records), path);
}

std::vector<PredictionRecord> read_predictions_file(const std::string& path) {
  return parse_predictions(slurp(path), path);
}

}  // namespace bikegen
