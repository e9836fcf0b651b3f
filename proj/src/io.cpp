// Copyright 2026 The nebcert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nebcert/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "nebcert/errors.hpp"

namespace nebcert {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string at_line(int line, const std::string& msg) { return "line " + std::to_string(line) + ": " + msg; }

double parse_double(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(at_line(line, "expected a number, got '" + s + "'"));
  }
}

std::int64_t parse_int(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(at_line(line, "expected an integer, got '" + s + "'"));
  }
}

/// Reads non-empty, non-comment rows; the first is the header.
struct CsvRows {
  std::vector<std::string> header;
  std::vector<std::pair<int, std::vector<std::string>>> rows;
};

CsvRows read_rows(std::istream& in) {
  CsvRows out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto cells = split_csv(t);
    if (out.header.empty()) {
      out.header = std::move(cells);
    } else {
      if (cells.size() != out.header.size()) {
        throw ConfigError(at_line(number, "expected " + std::to_string(out.header.size()) + " columns, got " +
                                              std::to_string(cells.size())));
      }
      out.rows.emplace_back(number, std::move(cells));
    }
  }
  if (out.header.empty()) throw ConfigError("CSV input is empty");
  return out;
}

Complex complex_from_json(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ConfigError("matrix entry must be a number or [re, im], got " + j.dump());
}

StateLabel label_from_json(const nlohmann::json& j) {
  if (!j.is_string()) throw ConfigError("state label must be a string, got " + j.dump());
  return parse_label(j.get<std::string>());
}

template <typename T>
T required(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

DensityMatrix state_for(const std::map<StateLabel, DensityMatrix>& states, const StateLabel& l, const char* side) {
  auto it = states.find(l);
  if (it == states.end()) throw ConfigError(std::string("tomography has no ") + side + " state " + to_string(l));
  return it->second;
}

}  // namespace

std::string format_double(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

TomographySet read_tomography_csv(std::istream& in) {
  const CsvRows csv = read_rows(in);
  const std::vector<std::string> plain{"basis", "bit", "exp_x", "exp_y", "exp_z"};
  std::vector<std::string> with_role{"role"};
  with_role.insert(with_role.end(), plain.begin(), plain.end());
  const bool has_role = csv.header == with_role;
  if (!has_role && csv.header != plain) {
    throw ConfigError("tomography header must be 'basis,bit,exp_x,exp_y,exp_z' (optionally led by 'role')");
  }
  TomographySet out;
  for (const auto& [line, cells] : csv.rows) {
    const std::size_t o = has_role ? 1 : 0;
    StateLabel label;
    DensityMatrix rho;
    try {
      label = make_label(cells[o], static_cast<int>(parse_int(cells[o + 1], line)));
      rho = reconstruct_tomography(parse_double(cells[o + 2], line), parse_double(cells[o + 3], line),
                                   parse_double(cells[o + 4], line));
    } catch (const ConfigError& e) {
      const std::string msg = e.what();
      throw ConfigError(msg.rfind("line ", 0) == 0 ? msg : at_line(line, msg));
    }
    const std::string role = has_role ? cells[0] : "both";
    if (role != "xi" && role != "psi" && role != "both") {
      throw ConfigError(at_line(line, "role must be 'xi' or 'psi', got '" + role + "'"));
    }
    if (role != "psi") {
      if (!out.xi.emplace(label, rho).second) throw ConfigError(at_line(line, "duplicate xi state " + to_string(label)));
    }
    if (role != "xi") {
      if (!out.psi.emplace(label, rho).second) {
        throw ConfigError(at_line(line, "duplicate psi state " + to_string(label)));
      }
    }
  }
  return out;
}

TomographySet read_tomography_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open tomography file '" + path + "'");
  try {
    return read_tomography_csv(in);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

PayoffTable table_from_tomography(TableKind kind, const TomographySet& states) {
  std::vector<DensityMatrix> xi, psi;
  for (const StateLabel& l : table_labels(kind)) {
    xi.push_back(state_for(states.xi, l, "xi"));
    psi.push_back(state_for(states.psi, l, "psi"));
  }
  return kind == TableKind::SixState ? six_state_table(std::move(xi), std::move(psi))
                                     : four_state_table(std::move(xi), std::move(psi));
}

void write_gain_csv(std::ostream& out, const GainRecord& gains) {
  out << "x_basis,x_bit,y_basis,y_bit,alpha_xi,alpha_psi,trials,clicks,gain\n";
  for (const auto& [key, e] : gains.entries()) {
    const auto [ax, ay] = intensities_of(key.pair, gains.intensities());
    out << to_string(key.x.basis) << ',' << key.x.bit << ',' << to_string(key.y.basis) << ',' << key.y.bit << ','
        << format_double(ax, 17) << ',' << format_double(ay, 17) << ',' << e.trials << ',' << e.clicks << ','
        << format_double(e.gain, 17) << '\n';
  }
}

GainRecord read_gain_csv(std::istream& in) {
  const CsvRows csv = read_rows(in);
  std::vector<std::string> expected{"x_basis", "x_bit", "y_basis", "y_bit", "alpha_xi", "alpha_psi", "trials", "clicks"};
  const bool has_gain = csv.header.size() == 9 && csv.header.back() == "gain";
  if (has_gain) expected.push_back("gain");
  if (csv.header != expected) {
    throw ConfigError("gain CSV header must be x_basis,x_bit,y_basis,y_bit,alpha_xi,alpha_psi,trials,clicks[,gain]");
  }

  struct Row {
    int line;
    StateLabel x, y;
    double ax, ay;
    GainEntry entry;
  };
  std::vector<Row> rows;
  std::set<double> alphas;
  for (const auto& [line, c] : csv.rows) {
    try {
      Row r{line,
            make_label(c[0], static_cast<int>(parse_int(c[1], line))),
            make_label(c[2], static_cast<int>(parse_int(c[3], line))),
            parse_double(c[4], line),
            parse_double(c[5], line),
            {}};
      const std::int64_t trials = parse_int(c[6], line);
      const std::int64_t clicks = parse_int(c[7], line);
      if (has_gain) {
        r.entry = {parse_double(c[8], line), trials, clicks};
      } else if (trials > 0) {
        r.entry = GainEntry::counted(trials, clicks);
      } else {
        throw ConfigError("row has no gain column and zero trials");
      }
      alphas.insert(r.ax);
      alphas.insert(r.ay);
      rows.push_back(r);
    } catch (const ConfigError& e) {
      const std::string msg = e.what();
      throw ConfigError(msg.rfind("line ", 0) == 0 ? msg : at_line(line, msg));
    }
  }
  if (alphas.size() != 3) {
    throw ConfigError("gain CSV must use exactly three intensities, found " + std::to_string(alphas.size()));
  }
  auto it = alphas.begin();
  IntensitySet s;
  s.omega = *it++;
  s.nu = *it++;
  s.mu = *it;
  GainRecord record(s);
  for (const Row& r : rows) {
    bool placed = false;
    for (IntensityPair p : kIntensityPairs) {
      if (intensities_of(p, s) == std::pair(r.ax, r.ay)) {
        try {
          record.set(r.x, r.y, p, r.entry);
        } catch (const ConfigError& e) {
          throw ConfigError(at_line(r.line, e.what()));
        }
        placed = true;
        break;
      }
    }
    if (!placed) throw ConfigError(at_line(r.line, "intensity pair is not one of the seven decoy settings"));
  }
  return record;
}

Mat2 mat2_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || !j[1].is_array() || j[0].size() != 2 ||
      j[1].size() != 2) {
    throw ConfigError("expected a 2x2 matrix [[a, b], [c, d]], got " + j.dump());
  }
  Mat2 m;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m(r, c) = complex_from_json(j[r][c]);
  return m;
}

Channel channel_from_json(const nlohmann::json& j) {
  const auto type = required<std::string>(j, "type");
  if (type == "identity") return Channel::identity();
  if (type == "decoherence") return decoherence(required<double>(j, "gamma"));
  if (type == "eb") {
    EBChannelSpec spec;
    for (const auto& m : required<nlohmann::json>(j, "povm")) spec.povm.push_back(mat2_from_json(m));
    for (const auto& m : required<nlohmann::json>(j, "outputs")) {
      try {
        spec.outputs.emplace_back(mat2_from_json(m));
      } catch (const InvalidStateError& e) {
        throw ConfigError(std::string("measure-and-prepare output: ") + e.what());
      }
    }
    return from_eb_spec(spec);
  }
  if (type == "kraus") {
    std::vector<Mat2> ops;
    for (const auto& m : required<nlohmann::json>(j, "ops")) ops.push_back(mat2_from_json(m));
    return Channel(std::move(ops));
  }
  throw ConfigError("unknown channel type '" + type + "'");
}

PayoffTable payoff_table_from_json(const nlohmann::json& j, const TomographySet* states) {
  std::vector<StateLabel> xi_labels, psi_labels;
  for (const auto& l : required<nlohmann::json>(j, "xi")) xi_labels.push_back(label_from_json(l));
  for (const auto& l : required<nlohmann::json>(j, "psi")) psi_labels.push_back(label_from_json(l));
  std::vector<DensityMatrix> xi_states, psi_states;
  for (const auto& l : xi_labels) xi_states.push_back(states ? state_for(states->xi, l, "xi") : ideal_state(l));
  for (const auto& l : psi_labels) psi_states.push_back(states ? state_for(states->psi, l, "psi") : ideal_state(l));

  Eigen::MatrixXd payoff = Eigen::MatrixXd::Zero(xi_labels.size(), psi_labels.size());
  std::set<std::pair<int, int>> seen;
  auto index_of = [](const std::vector<StateLabel>& labels, const StateLabel& l, const char* side) {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == l) return static_cast<int>(i);
    throw ConfigError(std::string("payoff entry uses ") + side + " label " + to_string(l) + " not in the list");
  };
  for (const auto& e : required<nlohmann::json>(j, "payoff")) {
    const int x = index_of(xi_labels, label_from_json(required<nlohmann::json>(e, "x")), "xi");
    const int y = index_of(psi_labels, label_from_json(required<nlohmann::json>(e, "y")), "psi");
    if (!seen.emplace(x, y).second) throw ConfigError("payoff entry listed twice: " + e.dump());
    payoff(x, y) = required<double>(e, "value");
  }
  return PayoffTable(std::move(xi_labels), std::move(xi_states), std::move(psi_labels), std::move(psi_states),
                     std::move(payoff));
}

nlohmann::json to_json(const BlochVector& v) { return nlohmann::json::array({v.x, v.y, v.z}); }

nlohmann::json to_json(const EBBoundResult& r) {
  return {{"value", r.value},
          {"threshold", r.threshold()},
          {"argmax_a", to_json(r.argmax_a)},
          {"argmax_b", to_json(r.argmax_b)},
          {"method", to_string(r.method)},
          {"restarts", r.restarts},
          {"converged", r.converged}};
}

}  // namespace nebcert
