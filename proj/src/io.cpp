#include "bishopdisc/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bishopdisc {

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error("invalid JSON in " + path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

namespace {

std::vector<int> monomial(const json& t, int vars) {
  const auto e = t.at("monomial").get<std::vector<int>>();
  if (static_cast<int>(e.size()) != vars)
    throw Error("monomial has " + std::to_string(e.size()) + " exponents, expected " + std::to_string(vars));
  return e;
}

}  // namespace

AlmostComplexStructure structure_from_json(const json& j) {
  try {
    const int n = j.at("n").get<int>();
    if (n < 1 || n > kMaxComplexDim) throw Error("structure dimension n out of range");
    if (j.value("standard", false)) return AlmostComplexStructure::standard(n);
    const int d = 2 * n;
    Polynomial<RMat> poly(d, RMat::Zero(d, d));
    for (const auto& t : j.at("terms")) {
      RMat c = RMat::Zero(d, d);
      if (t.contains("matrix")) {
        const auto rows = t.at("matrix").get<std::vector<std::vector<double>>>();
        if (static_cast<int>(rows.size()) != d) throw Error("coefficient matrix must be 2n x 2n");
        for (int a = 0; a < d; ++a) {
          if (static_cast<int>(rows[a].size()) != d) throw Error("coefficient matrix must be 2n x 2n");
          for (int b = 0; b < d; ++b) c(a, b) = rows[a][b];
        }
      }
      if (t.contains("entries"))
        for (const auto& e : t.at("entries")) {
          const int a = e.at(0).get<int>(), b = e.at(1).get<int>();
          if (a < 0 || a >= d || b < 0 || b >= d) throw Error("matrix entry index out of range");
          c(a, b) += e.at(2).get<double>();
        }
      poly.add_term(monomial(t, d), c);
    }
    return polynomial_structure(n, poly, j.value("add_standard", true), j.value("retract", false),
                                j.value("name", std::string("polynomial")));
  } catch (const json::exception& e) {
    throw Error(std::string("malformed structure descriptor: ") + e.what());
  }
}

GenericSubmanifold manifold_from_json(const json& j) {
  try {
    const int n = j.at("n").get<int>(), m = j.at("m").get<int>();
    if (m < 1 || m >= n || n > kMaxComplexDim) throw Error("manifold needs 1 <= m < n <= 6");
    const int vars = 2 * n - m;
    Polynomial<RVec> poly(vars, RVec::Zero(m));
    for (const auto& t : j.value("terms", json::array())) {
      const auto c = t.at("coeff").get<std::vector<double>>();
      if (static_cast<int>(c.size()) != m) throw Error("manifold coefficient must have m entries");
      RVec v(m);
      for (int k = 0; k < m; ++k) v[k] = c[k];
      poly.add_term(monomial(t, vars), v);
    }
    return GenericSubmanifold::from_polynomial(n, m, poly, j.value("name", std::string("polynomial")));
  } catch (const json::exception& e) {
    throw Error(std::string("malformed manifold descriptor: ") + e.what());
  }
}

json to_json(const DiscFunction& f) {
  const auto& g = f.grid();
  json values = json::array();
  for (int i = 0; i < g->n_rings(); ++i)
    for (int k = 0; k < g->n_theta(); ++k) values.push_back({f(i, k).real(), f(i, k).imag()});
  return {{"grid", {{"n_theta", g->n_theta()}, {"n_r", g->n_r()}}}, {"values", values}};
}

DiscFunction disc_function_from_json(const json& j) {
  try {
    const auto grid = DiscGrid::get(j.at("grid").at("n_theta").get<int>(), j.at("grid").at("n_r").get<int>());
    const auto& v = j.at("values");
    if (static_cast<int>(v.size()) != grid->n_rings() * grid->n_theta())
      throw Error("disc function value count does not match its grid");
    Eigen::MatrixXcd vals(grid->n_rings(), grid->n_theta());
    for (int i = 0; i < grid->n_rings(); ++i)
      for (int k = 0; k < grid->n_theta(); ++k) {
        const auto& p = v[i * grid->n_theta() + k];
        vals(i, k) = cplx(p.at(0).get<double>(), p.at(1).get<double>());
      }
    return DiscFunction(grid, vals);
  } catch (const json::exception& e) {
    throw Error(std::string("malformed disc function: ") + e.what());
  }
}

json to_json(const Disc& f) {
  json comps = json::array();
  for (const auto& c : f.components) comps.push_back(to_json(c));
  return {{"components", comps}};
}

Disc disc_from_json(const json& j) {
  std::vector<DiscFunction> comps;
  for (const auto& c : j.at("components")) comps.push_back(disc_function_from_json(c));
  return Disc(std::move(comps));
}

json to_json(const BoundarySignal& b) {
  const Eigen::VectorXcd c = b.coefficients();
  const int n = static_cast<int>(c.size());
  json out = json::array();
  for (int k = 0; k < n; ++k) out.push_back({k < n / 2 ? k : k - n, c[k].real(), c[k].imag()});
  return out;
}

BoundarySignal boundary_signal_from_json(const json& j) {
  const int n = static_cast<int>(j.size());
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n);
  for (const auto& t : j) {
    const int mode = t.at(0).get<int>();
    const int col = mode >= 0 ? mode : mode + n;
    if (col < 0 || col >= n) throw Error("boundary coefficient mode out of range");
    c[col] = cplx(t.at(1).get<double>(), t.at(2).get<double>());
  }
  return BoundarySignal::from_coefficients(c);
}

namespace {

void dump_value(const json& j, std::ostringstream& os, int indent) {
  const std::string pad(indent + 2, ' '), close(indent, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << json(it.key()).dump() << ": ";
        dump_value(it.value(), os, indent + 2);
      }
      os << "\n" << close << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        dump_value(j[i], os, indent + 2);
      }
      os << "\n" << close << "]";
      return;
    }
    case json::value_t::number_float: {
      const double x = j.get<double>();
      if (std::isnan(x)) {
        os << "\"nan\"";
      } else if (std::isinf(x)) {
        os << (x > 0 ? "\"inf\"" : "\"-inf\"");
      } else {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.12e", x);
        os << buf;
      }
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace

std::string dump_report(const json& j) {
  std::ostringstream os;
  dump_value(j, os, 0);
  os << "\n";
  return os.str();
}

}  // namespace bishopdisc
