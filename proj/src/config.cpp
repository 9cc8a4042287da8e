#include "dps/config.hpp"

#include <fstream>
#include <sstream>

#include "dps/errors.hpp"

namespace dps {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

WorkbenchConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config: " + path);

  WorkbenchConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DataError(path + ":" + std::to_string(line_no) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    auto as_size = [&] {
      try {
        return static_cast<std::size_t>(std::stoull(value));
      } catch (const std::exception&) {
        throw DataError(path + ":" + std::to_string(line_no) + ": bad integer");
      }
    };
    auto as_int = [&] {
      try {
        return std::stoi(value);
      } catch (const std::exception&) {
        throw DataError(path + ":" + std::to_string(line_no) + ": bad integer");
      }
    };
    auto as_double = [&] {
      try {
        return std::stod(value);
      } catch (const std::exception&) {
        throw DataError(path + ":" + std::to_string(line_no) + ": bad number");
      }
    };

    if (key == "l1_size") cfg.cache.l1_size = as_size();
    else if (key == "l2_size") cfg.cache.l2_size = as_size();
    else if (key == "line_size") cfg.cache.line_size = as_size();
    else if (key == "l1_assoc") cfg.cache.l1_assoc = as_int();
    else if (key == "l2_assoc") cfg.cache.l2_assoc = as_int();
    else if (key == "epi_rf") cfg.epi.rf = as_double();
    else if (key == "epi_l1") cfg.epi.l1 = as_double();
    else if (key == "epi_l2") cfg.epi.l2 = as_double();
    else if (key == "epi_mem_rd") cfg.epi.mem_rd = as_double();
    else if (key == "epi_mem_wr") cfg.epi.mem_wr = as_double();
    else if (key == "epi_scaling") {
      try {
        cfg.scaling = epi_scaling_from_name(value);
      } catch (const std::invalid_argument& e) {
        throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
      }
    } else {
      throw DataError(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }

  try {
    cfg.cache.validate();
    cfg.epi.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(path + ": " + e.what());
  }
  return cfg;
}

}  // namespace dps
