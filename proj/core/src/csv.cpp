#include "tinygan/csv.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "tinygan/errors.hpp"

namespace tinygan {

namespace {

constexpr std::string_view kHeader = "t,theta,psi,alpha";

std::string_view next_field(std::string_view& rest) {
  const auto comma = rest.find(',');
  std::string_view field = rest.substr(0, comma);
  rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
  return field;
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 64> buf;
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw DomainError("failed to format double");
  return std::string(buf.data(), ptr);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw DomainError("not a valid number: '" + std::string(text) + "'");
  }
  return value;
}

std::string trajectory_to_csv(const Trajectory& traj) {
  std::string out(kHeader);
  out.push_back('\n');
  for (const State& s : traj.samples) {
    out += format_double(s.t);
    out.push_back(',');
    out += format_double(s.theta);
    out.push_back(',');
    out += format_double(s.psi);
    out.push_back(',');
    out += format_double(s.alpha);
    out.push_back('\n');
  }
  return out;
}

void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open for writing: " + path.string());
  const std::string text = trajectory_to_csv(traj);
  file.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!file) throw IoError("write failed: " + path.string());
}

std::vector<State> parse_trajectory_csv(std::string_view text, std::string_view source_name) {
  std::vector<State> samples;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != kHeader) {
        throw ParseError(std::string(source_name) + ":1: expected header '" + std::string(kHeader) + "'",
                         1);
      }
      continue;
    }
    std::string_view rest = line;
    State s;
    try {
      s.t = parse_double(next_field(rest));
      s.theta = parse_double(next_field(rest));
      s.psi = parse_double(next_field(rest));
      s.alpha = parse_double(next_field(rest));
    } catch (const DomainError& e) {
      throw ParseError(std::string(source_name) + ":" + std::to_string(line_no) + ": " + e.what(),
                       line_no);
    }
    if (!rest.empty()) {
      throw ParseError(std::string(source_name) + ":" + std::to_string(line_no) + ": extra fields",
                       line_no);
    }
    samples.push_back(s);
  }
  return samples;
}

std::vector<State> read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open for reading: " + path.string());
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return parse_trajectory_csv(buffer.str(), path.string());
}

}  // namespace tinygan
