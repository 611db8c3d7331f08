#include "rankreg/experiment_config.hpp"

#include <fstream>
#include <set>

#include "rankreg/io.hpp"

namespace rankreg {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = value.find(',', start);
    items.push_back(trim(value.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return items;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::istream& in, const std::string& source) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(source, line_no, "expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ParseError(source, line_no, "duplicate key '" + key + "'");
    if (value.empty()) throw ParseError(source, line_no, "key '" + key + "' has no value");

    const auto as_int = [&] { return parse_int(value, source + " key '" + key + "'", line_no); };
    const auto as_double = [&] { return parse_double(value, source + " key '" + key + "'", line_no); };

    if (key == "d") {
      cfg.base.d = static_cast<int>(as_int());
    } else if (key == "n") {
      cfg.base.n = as_int();
    } else if (key == "m") {
      cfg.base.m = as_int();
    } else if (key == "lambda_min") {
      cfg.base.lambda_min = as_double();
    } else if (key == "target_pe") {
      cfg.base.target_pe = as_double();
    } else if (key == "repetitions") {
      cfg.base.repetitions = static_cast<int>(as_int());
    } else if (key == "master_seed") {
      const std::int64_t seed = as_int();
      if (seed < 0) throw ParseError(source, line_no, "key 'master_seed' must be non-negative");
      cfg.base.master_seed = static_cast<std::uint64_t>(seed);
    } else if (key == "angle_threshold") {
      cfg.angle_threshold = as_double();
    } else if (key == "swept_parameter") {
      cfg.swept_parameter = parse_swept_parameter(value);
      if (!cfg.swept_parameter) {
        throw ParseError(source, line_no, "key 'swept_parameter' must be one of n, m, d, lambda_min");
      }
    } else if (key == "m_rule") {
      const auto rule = parse_m_rule(value);
      if (!rule) throw ParseError(source, line_no, "key 'm_rule' must be fixed or n_log_n");
      cfg.m_rule = *rule;
    } else if (key == "grid") {
      for (const auto& item : split_list(value)) {
        cfg.grid.push_back(parse_double(item, source + " key 'grid'", line_no));
      }
    } else if (key == "n_grid") {
      for (const auto& item : split_list(value)) {
        cfg.n_grid.push_back(parse_int(item, source + " key 'n_grid'", line_no));
      }
    } else {
      throw ParseError(source, line_no, "unknown key '" + key + "'");
    }
  }
  return cfg;
}

ExperimentConfig parse_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return parse_experiment_config(in, path.string());
}

SweepSpec ExperimentConfig::to_sweep_spec() const {
  if (!swept_parameter) throw DomainError("sweep config needs 'swept_parameter'");
  SweepSpec spec{base, *swept_parameter, grid, m_rule};
  if (spec.grid.empty() && *swept_parameter == SweptParameter::n) {
    for (auto n : n_grid) spec.grid.push_back(static_cast<double>(n));
  }
  if (spec.grid.empty()) throw DomainError("sweep config needs 'grid'");
  if (m_rule == MRule::n_log_n && *swept_parameter != SweptParameter::m) spec.base.m = n_log_n(spec.base.n);
  spec.validate();
  return spec;
}

MinNQuery ExperimentConfig::to_min_n_query() const {
  if (n_grid.empty()) throw DomainError("min-n config needs 'n_grid'");
  MinNQuery q{base, angle_threshold, n_grid};
  q.validate();
  return q;
}

}  // namespace rankreg
