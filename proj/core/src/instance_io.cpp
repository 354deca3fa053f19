#include "qlh/instance_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qlh/error.hpp"

namespace qlh {

using ojson = nlohmann::ordered_json;

namespace {

double finite_number(const ojson& v, const std::string& where) {
  if (!v.is_number()) throw ValidationError(where + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ValidationError(where + ": value is not finite");
  return x;
}

int integer(const ojson& v, const std::string& where) {
  if (!v.is_number_integer()) throw ValidationError(where + ": expected an integer");
  return v.get<int>();
}

const ojson& field(const ojson& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ValidationError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(where + ": missing field '" + key + "'");
  return *it;
}

}  // namespace

std::string instance_to_json(const Instance& inst, int indent) {
  ojson j;
  j["n"] = inst.n;
  j["kind"] = to_string(inst.kind);
  ojson terms = ojson::array();
  for (std::size_t t = 0; t < inst.terms.size(); ++t) {
    const auto& term = inst.terms[t];
    if (!std::isfinite(term.weight) || !term.coeffs.alpha.allFinite())
      throw ValidationError("term " + std::to_string(t) + " has non-finite data");
    ojson alpha = ojson::array();
    for (int k = 0; k < 4; ++k) {
      ojson row = ojson::array();
      for (int l = 0; l < 4; ++l) row.push_back(term.coeffs.alpha(k, l));
      alpha.push_back(row);
    }
    terms.push_back({{"i", term.i}, {"j", term.j}, {"weight", term.weight}, {"alpha", alpha}});
  }
  j["terms"] = terms;
  return j.dump(indent) + "\n";
}

Instance instance_from_json(std::string_view text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const ojson::parse_error& e) {
    throw ValidationError(std::string("instance JSON does not parse: ") + e.what());
  }
  Instance inst;
  inst.n = integer(field(j, "n", "instance"), "n");
  const ojson& kind = field(j, "kind", "instance");
  if (!kind.is_string()) throw ValidationError("kind: expected a string");
  inst.kind = parse_instance_type(kind.get<std::string>());
  const ojson& terms = field(j, "terms", "instance");
  if (!terms.is_array()) throw ValidationError("terms: expected an array");
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const std::string where = "terms[" + std::to_string(t) + "]";
    const ojson& term = terms[t];
    TwoLocalTerm out;
    out.i = integer(field(term, "i", where), where + ".i");
    out.j = integer(field(term, "j", where), where + ".j");
    out.weight = finite_number(field(term, "weight", where), where + ".weight");
    const ojson& alpha = field(term, "alpha", where);
    if (!alpha.is_array() || alpha.size() != 4)
      throw ValidationError(where + ".alpha: expected a 4x4 array");
    for (int k = 0; k < 4; ++k) {
      const ojson& row = alpha[static_cast<std::size_t>(k)];
      if (!row.is_array() || row.size() != 4)
        throw ValidationError(where + ".alpha: expected a 4x4 array");
      for (int l = 0; l < 4; ++l)
        out.coeffs.alpha(k, l) = finite_number(row[static_cast<std::size_t>(l)],
                                               where + ".alpha");
    }
    inst.terms.push_back(out);
  }
  return inst;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw ValidationError("failed writing '" + path.string() + "'");
}

void write_instance(const std::filesystem::path& path, const Instance& inst) {
  write_text_file(path, instance_to_json(inst));
}

Instance read_instance(const std::filesystem::path& path) {
  return instance_from_json(read_text_file(path));
}

}  // namespace qlh
