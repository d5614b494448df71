#include "seba/serialize.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "seba/errors.hpp"
#include "seba/tolerances.hpp"

namespace seba {

using nlohmann::json;

void write_spectrum_jsonl(const Spectrum& spec, std::ostream& os) {
  json head;
  head["kind"] = to_string(spec.kind);
  head["e_max"] = spec.e_max;
  head["params"] = json::object();
  for (const auto& [k, v] : spec.params) head["params"][k] = v;
  os << head.dump() << '\n';
  for (const auto& ln : spec.lines) {
    json row;
    row["index"] = ln.index;
    row["energy"] = ln.energy;
    row["amplitude_re"] = ln.amplitude.real();
    row["amplitude_im"] = ln.amplitude.imag();
    row["weight"] = ln.weight;
    if (!ln.modes.empty()) {
      json modes = json::array();
      for (const auto& md : ln.modes)
        modes.push_back(json::array({md.n, md.m, md.amp}));
      row["modes"] = std::move(modes);
    }
    os << row.dump() << '\n';
  }
}

Spectrum read_spectrum_jsonl(std::istream& is) {
  std::string line;
  if (!std::getline(is, line))
    throw parameter_error("spectrum stream is empty");
  json head = json::parse(line, nullptr, false);
  if (head.is_discarded() || !head.contains("kind"))
    throw parameter_error("malformed spectrum header");

  Spectrum spec;
  spec.kind = spectrum_kind_from_string(head.at("kind").get<std::string>());
  spec.e_max = head.at("e_max").get<double>();
  if (head.contains("params"))
    for (auto it = head["params"].begin(); it != head["params"].end(); ++it)
      spec.params[it.key()] = it.value().get<double>();

  while (std::getline(is, line)) {
    if (line.empty()) continue;
    json row = json::parse(line, nullptr, false);
    if (row.is_discarded())
      throw parameter_error("malformed spectrum row: " + line);
    SpectralLine ln;
    ln.index = row.at("index").get<std::size_t>();
    ln.energy = row.at("energy").get<double>();
    ln.amplitude = {row.at("amplitude_re").get<double>(),
                    row.at("amplitude_im").get<double>()};
    ln.weight = row.at("weight").get<double>();
    if (row.contains("modes"))
      for (const auto& md : row["modes"])
        ln.modes.push_back(Mode{md.at(0).get<int>(), md.at(1).get<int>(),
                                md.at(2).get<double>()});
    spec.lines.push_back(std::move(ln));
  }

  for (std::size_t k = 0; k < spec.lines.size(); ++k) {
    const auto& ln = spec.lines[k];
    if (ln.index != k + 1)
      throw parameter_error("spectrum rows are not consecutively indexed");
    if (k > 0 && !(ln.energy > spec.lines[k - 1].energy))
      throw parameter_error("spectrum energies are not strictly increasing");
    if (ln.energy > spec.e_max)
      throw parameter_error("spectrum energy exceeds the stated e_max");
    double scale = std::max(1.0, ln.weight);
    if (std::fabs(std::norm(ln.amplitude) - ln.weight) >
        tol::weight_rel * scale)
      throw parameter_error("weight does not match |amplitude|^2");
  }
  return spec;
}

Spectrum read_spectrum_text(std::istream& is) {
  std::vector<std::pair<double, std::complex<double>>> raw;
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    for (std::string tok; ss >> tok;) tokens.push_back(tok);
    if (tokens.empty()) continue;
    if (tokens.size() != 3)
      throw parameter_error("malformed spectrum row: " + line);
    try {
      double e = std::stod(tokens[0]);
      std::complex<double> amp{std::stod(tokens[1]), std::stod(tokens[2])};
      raw.emplace_back(e, amp);
    } catch (const std::exception&) {
      throw parameter_error("malformed spectrum row: " + line);
    }
  }
  if (raw.empty()) throw parameter_error("spectrum file has no rows");
  return reduce_multiplicities(raw);
}

void write_spectrum_text(const Spectrum& spec, std::ostream& os) {
  os << "# energy amplitude_re amplitude_im\n";
  os.precision(17);
  for (const auto& ln : spec.lines)
    os << ln.energy << ' ' << ln.amplitude.real() << ' '
       << ln.amplitude.imag() << '\n';
}

}  // namespace seba
