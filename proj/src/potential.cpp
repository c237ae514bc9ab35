#include "rwrp/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "rwrp/numeric.hpp"
#include "rwrp/quadrature.hpp"

namespace rwrp::env {

namespace {
constexpr double kAbsTol = 1e-10;
constexpr double kRelTol = 1e-8;
constexpr double kTailTol = 1e-13;

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}
}  // namespace

struct Potential::Impl {
  Family family;
  // point_mass
  double v0 = 0.0;
  // atoms: sorted ascending, cumulative mass precomputed
  std::vector<double> az, am, acum;
  // pareto
  double alpha = 0.0, z_min = 0.0;
  // exponential
  double rate = 0.0;
  // transformed_log
  std::shared_ptr<const Impl> base;
  double beta = 0.0;

  double inf() const;  // infimum of the support
};

double Potential::Impl::inf() const {
  switch (family) {
    case Family::point_mass:
      return v0;
    case Family::atoms:
      return az.front();
    case Family::pareto:
      return z_min;
    case Family::exponential:
      return 0.0;
    case Family::transformed_log:
      return std::log1p(beta * base->inf()) / beta;
  }
  return 0.0;
}

Potential Potential::point_mass(double v0) {
  if (!(v0 >= 0.0)) throw std::invalid_argument("point_mass: v0 must be >= 0");
  auto impl = std::make_shared<Impl>();
  impl->family = Family::point_mass;
  impl->v0 = v0;
  return Potential(impl);
}

Potential Potential::atoms(std::vector<double> z, std::vector<double> mass) {
  if (z.empty() || z.size() != mass.size())
    throw std::invalid_argument("atoms: need matching nonempty lists");
  std::vector<std::size_t> idx(z.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return z[a] < z[b]; });
  auto impl = std::make_shared<Impl>();
  impl->family = Family::atoms;
  double total = 0.0;
  for (std::size_t i : idx) {
    if (!(z[i] >= 0.0)) throw std::invalid_argument("atoms: negative support");
    if (!(mass[i] > 0.0)) throw std::invalid_argument("atoms: masses must be > 0");
    impl->az.push_back(z[i]);
    impl->am.push_back(mass[i]);
    total += mass[i];
  }
  if (std::fabs(total - 1.0) > 1e-9)
    throw std::invalid_argument("atoms: masses must sum to 1");
  double c = 0.0;
  for (double& m : impl->am) {
    m /= total;
    c += m;
    impl->acum.push_back(c);
  }
  impl->acum.back() = 1.0;
  return Potential(impl);
}

Potential Potential::pareto(double alpha, double z_min) {
  if (!(alpha > 0.0) || !(z_min > 0.0))
    throw std::invalid_argument("pareto: alpha and z_min must be > 0");
  auto impl = std::make_shared<Impl>();
  impl->family = Family::pareto;
  impl->alpha = alpha;
  impl->z_min = z_min;
  return Potential(impl);
}

Potential Potential::exponential(double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be > 0");
  auto impl = std::make_shared<Impl>();
  impl->family = Family::exponential;
  impl->rate = rate;
  return Potential(impl);
}

Potential Potential::transformed_log(Potential base, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("transformed_log: beta must be > 0");
  auto impl = std::make_shared<Impl>();
  impl->family = Family::transformed_log;
  impl->base = base.impl_;
  impl->beta = beta;
  return Potential(impl);
}

Potential::Family Potential::family() const { return impl_->family; }

std::string Potential::describe() const {
  const Impl& s = *impl_;
  switch (s.family) {
    case Family::point_mass:
      return "family=pointmass v0=" + num(s.v0);
    case Family::atoms: {
      std::string out = "family=atoms z=";
      for (std::size_t i = 0; i < s.az.size(); ++i)
        out += (i ? "," : "") + num(s.az[i]);
      out += " mass=";
      for (std::size_t i = 0; i < s.am.size(); ++i)
        out += (i ? "," : "") + num(s.am[i]);
      return out;
    }
    case Family::pareto:
      return "family=pareto alpha=" + num(s.alpha) + " zmin=" + num(s.z_min);
    case Family::exponential:
      return "family=exponential rate=" + num(s.rate);
    case Family::transformed_log:
      return "family=translog beta=" + num(s.beta) + " base{" +
             Potential(s.base).describe() + "}";
  }
  return "";
}

namespace {
std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}
}  // namespace

Potential Potential::parse(const std::map<std::string, std::string>& kv) {
  auto get = [&](const std::string& k) -> std::string {
    auto it = kv.find(k);
    if (it == kv.end())
      throw std::invalid_argument("potential: missing key '" + k + "'");
    return it->second;
  };
  std::string fam = get("family");
  if (fam == "pointmass") return point_mass(std::stod(get("v0")));
  if (fam == "atoms") return atoms(parse_list(get("z")), parse_list(get("mass")));
  if (fam == "pareto")
    return pareto(std::stod(get("alpha")), std::stod(get("zmin")));
  if (fam == "exponential") return exponential(std::stod(get("rate")));
  if (fam == "translog") {
    std::map<std::string, std::string> base_kv;
    for (const auto& [k, v] : kv) {
      if (k.rfind("base.", 0) == 0) base_kv[k.substr(5)] = v;
    }
    return transformed_log(parse(base_kv), std::stod(get("beta")));
  }
  throw std::invalid_argument("potential: unknown family '" + fam + "'");
}

namespace {
double transform_w(double z, double beta) { return std::log1p(beta * z) / beta; }
double transform_w_inv(double w, double beta) {
  if (w >= kInf) return kInf;
  return std::expm1(beta * w) / beta;
}
}  // namespace

double Potential::quantile(double u) const {
  const Impl& s = *impl_;
  if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("quantile: u in (0,1)");
  switch (s.family) {
    case Family::point_mass:
      return s.v0;
    case Family::atoms: {
      auto it = std::lower_bound(s.acum.begin(), s.acum.end(), u);
      std::size_t i = static_cast<std::size_t>(it - s.acum.begin());
      if (i >= s.az.size()) i = s.az.size() - 1;
      return s.az[i];
    }
    case Family::pareto:
      return s.z_min * std::pow(1.0 - u, -1.0 / s.alpha);
    case Family::exponential:
      return -std::log1p(-u) / s.rate;
    case Family::transformed_log:
      return transform_w(Potential(s.base).quantile(u), s.beta);
  }
  return 0.0;
}

double Potential::sample(SplitMix64& rng) const { return quantile(rng.next_unit()); }

double Potential::site_value(std::uint64_t seed, std::uint64_t site_key) const {
  std::uint64_t h = mix64(seed ^ mix64(site_key));
  double u = (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
  return quantile(u);
}

double Potential::tail_mass(double t) const {
  const Impl& s = *impl_;
  switch (s.family) {
    case Family::point_mass:
      return t <= s.v0 ? 1.0 : 0.0;
    case Family::atoms: {
      // mass of atoms with z >= t
      auto it = std::lower_bound(s.az.begin(), s.az.end(), t);
      std::size_t i = static_cast<std::size_t>(it - s.az.begin());
      if (i == 0) return 1.0;
      return 1.0 - s.acum[i - 1];
    }
    case Family::pareto:
      return t <= s.z_min ? 1.0 : std::pow(t / s.z_min, -s.alpha);
    case Family::exponential:
      return t <= 0.0 ? 1.0 : std::exp(-s.rate * t);
    case Family::transformed_log:
      return Potential(s.base).tail_mass(transform_w_inv(t, s.beta));
  }
  return 0.0;
}

double Potential::interval_mass(double lo, double hi) const {
  if (!(hi > lo)) return 0.0;
  return std::max(0.0, tail_mass(lo) - tail_mass(hi));
}

double Potential::expect_interval(const std::function<double(double)>& g,
                                  double lo, double hi, double g_sup) const {
  const Impl& s = *impl_;
  if (!(hi > lo)) return 0.0;
  switch (s.family) {
    case Family::point_mass:
      return (s.v0 >= lo && s.v0 < hi) ? g(s.v0) : 0.0;
    case Family::atoms: {
      KahanSum acc;
      for (std::size_t i = 0; i < s.az.size(); ++i)
        if (s.az[i] >= lo && s.az[i] < hi) acc.add(s.am[i] * g(s.az[i]));
      return acc.value();
    }
    case Family::pareto: {
      // substitute z = z_min e^u; d mu = alpha e^{-alpha u} du
      double ulo = std::max(0.0, std::log(std::max(lo, s.z_min) / s.z_min));
      double uhi;
      if (hi >= kInf) {
        if (g_sup < kInf) {
          double cut = std::log(std::max(g_sup, 1.0) / kTailTol) / s.alpha;
          uhi = ulo + std::max(cut, 1.0);
        } else {
          uhi = kInf;  // handled by doubling below
        }
      } else {
        uhi = std::log(std::max(hi, s.z_min) / s.z_min);
        if (uhi <= ulo) return 0.0;
      }
      auto integrand = [&](double u) {
        return g(s.z_min * std::exp(u)) * s.alpha * std::exp(-s.alpha * u);
      };
      if (uhi < kInf)
        return integrate_adaptive(integrand, ulo, uhi, kAbsTol, kRelTol).value;
      // unbounded g: grow the window until increments are negligible
      double acc = 0.0, span = std::max(4.0, 4.0 / s.alpha), u0 = ulo;
      for (int it = 0; it < 80; ++it) {
        double inc = integrate_adaptive(integrand, u0, u0 + span, kAbsTol,
                                        kRelTol).value;
        acc += inc;
        u0 += span;
        span *= 1.5;
        if (std::fabs(inc) < std::max(kAbsTol, kRelTol * std::fabs(acc)) &&
            it >= 3)
          return acc;
      }
      throw NumericalError("pareto expectation did not converge");
    }
    case Family::exponential: {
      double zlo = std::max(0.0, lo);
      double zhi = hi;
      if (hi >= kInf) {
        double cut = std::log(std::max(g_sup < kInf ? g_sup : 1.0, 1.0) /
                              kTailTol) / s.rate;
        zhi = zlo + std::max(cut, 1.0);
        if (g_sup >= kInf) {
          auto integrand = [&](double z) {
            return g(z) * s.rate * std::exp(-s.rate * z);
          };
          double acc = 0.0, span = std::max(4.0, 4.0 / s.rate), z0 = zlo;
          for (int it = 0; it < 80; ++it) {
            double inc = integrate_adaptive(integrand, z0, z0 + span, kAbsTol,
                                            kRelTol).value;
            acc += inc;
            z0 += span;
            span *= 1.5;
            if (std::fabs(inc) < std::max(kAbsTol, kRelTol * std::fabs(acc)) &&
                it >= 3)
              return acc;
          }
          throw NumericalError("exponential expectation did not converge");
        }
      }
      auto integrand = [&](double z) {
        return g(z) * s.rate * std::exp(-s.rate * z);
      };
      return integrate_adaptive(integrand, zlo, zhi, kAbsTol, kRelTol).value;
    }
    case Family::transformed_log: {
      Potential base(s.base);
      double beta = s.beta;
      auto gw = [&](double z) { return g(transform_w(z, beta)); };
      return base.expect_interval(gw, transform_w_inv(lo, beta),
                                  transform_w_inv(hi, beta), g_sup);
    }
  }
  return 0.0;
}

double Potential::expect(const std::function<double(double)>& g,
                         double g_sup) const {
  return expect_interval(g, 0.0, kInf, g_sup);
}

double Potential::truncated_mean(double m) const {
  const Impl& s = *impl_;
  if (!(m >= 0.0)) return 0.0;
  switch (s.family) {
    case Family::point_mass:
      return s.v0 <= m ? s.v0 : 0.0;
    case Family::atoms: {
      KahanSum acc;
      for (std::size_t i = 0; i < s.az.size(); ++i)
        if (s.az[i] <= m) acc.add(s.am[i] * s.az[i]);
      return acc.value();
    }
    case Family::pareto: {
      if (m < s.z_min) return 0.0;
      double a = s.alpha, zm = s.z_min;
      if (std::fabs(a - 1.0) < 1e-12) return zm * std::log(m / zm) + 0.0;
      // alpha != 1: alpha zm^alpha (m^{1-a} - zm^{1-a}) / (1-a)
      return a * std::pow(zm, a) *
             (std::pow(m, 1.0 - a) - std::pow(zm, 1.0 - a)) / (1.0 - a);
    }
    case Family::exponential: {
      double rm = s.rate * m;
      return (1.0 - std::exp(-rm) * (1.0 + rm)) / s.rate;
    }
    case Family::transformed_log: {
      double beta = s.beta;
      auto w = [&](double z) { return transform_w(z, beta); };
      double cut = transform_w_inv(m, beta);
      // inclusive upper endpoint: nudge past the atom when the base is atomic
      double hi = std::nextafter(cut, kInf);
      return Potential(s.base).expect_interval(w, 0.0, hi, std::max(m, 1.0));
    }
  }
  return 0.0;
}

std::optional<double> Potential::mean() const {
  const Impl& s = *impl_;
  switch (s.family) {
    case Family::point_mass:
      return s.v0;
    case Family::atoms: {
      KahanSum acc;
      for (std::size_t i = 0; i < s.az.size(); ++i) acc.add(s.am[i] * s.az[i]);
      return acc.value();
    }
    case Family::pareto:
      if (s.alpha <= 1.0) return std::nullopt;
      return s.alpha * s.z_min / (s.alpha - 1.0);
    case Family::exponential:
      return 1.0 / s.rate;
    case Family::transformed_log: {
      // log damping always yields a finite mean for the supported bases
      double beta = s.beta;
      auto w = [&](double z) { return transform_w(z, beta); };
      return Potential(s.base).expect_interval(w, 0.0, kInf, kInf);
    }
  }
  return std::nullopt;
}

double Potential::laplace(double t) const {
  const Impl& s = *impl_;
  if (!(t >= 0.0)) throw std::invalid_argument("laplace: t must be >= 0");
  if (t == 0.0) return 1.0;
  switch (s.family) {
    case Family::point_mass:
      return std::exp(-t * s.v0);
    case Family::atoms: {
      KahanSum acc;
      for (std::size_t i = 0; i < s.az.size(); ++i)
        acc.add(s.am[i] * std::exp(-t * s.az[i]));
      return acc.value();
    }
    case Family::pareto: {
      // cut where either the measure tail or the exp factor is negligible
      double u_meas = std::log(1.0 / kTailTol) / s.alpha;
      double u_exp = std::log1p(std::log(1.0 / kTailTol) / (t * s.z_min));
      double uhi = std::min(u_meas, u_exp) + 1.0;
      auto integrand = [&](double u) {
        double z = s.z_min * std::exp(u);
        return std::exp(-t * z) * s.alpha * std::exp(-s.alpha * u);
      };
      return integrate_adaptive(integrand, 0.0, uhi, kAbsTol, kRelTol).value;
    }
    case Family::exponential:
      return s.rate / (s.rate + t);
    case Family::transformed_log: {
      double beta = s.beta;
      auto g = [&](double z) { return std::pow(1.0 + beta * z, -t / beta); };
      return Potential(s.base).expect(g, 1.0);
    }
  }
  return 0.0;
}

double Potential::log_laplace(double t) const {
  const Impl& s = *impl_;
  if (!(t >= 0.0)) throw std::invalid_argument("log_laplace: t must be >= 0");
  if (t == 0.0) return 0.0;
  switch (s.family) {
    case Family::point_mass:
      return -t * s.v0;
    case Family::atoms: {
      std::vector<double> terms(s.az.size());
      for (std::size_t i = 0; i < s.az.size(); ++i)
        terms[i] = std::log(s.am[i]) - t * s.az[i];
      return log_sum_exp(terms);
    }
    case Family::pareto: {
      // factor out the endpoint decay; the remaining integral lies in (0, 1]
      const double zm = s.z_min, a = s.alpha;
      const double cut = std::log(1.0 / kTailTol);
      const double uhi = std::min(cut / a, std::log1p(cut / (t * zm))) + 1.0;
      auto integrand = [&](double u) {
        return std::exp(-t * zm * std::expm1(u)) * a * std::exp(-a * u);
      };
      const double i0 = integrate_adaptive(integrand, 0.0, uhi, kAbsTol, kRelTol).value;
      return -t * zm + std::log(std::max(i0, 1e-300));
    }
    case Family::exponential:
      return std::log(s.rate) - std::log(s.rate + t);
    case Family::transformed_log: {
      if (atomic()) {
        auto atoms = atom_list();
        std::vector<double> terms(atoms.size());
        for (std::size_t i = 0; i < atoms.size(); ++i)
          terms[i] = std::log(atoms[i].second) - t * atoms[i].first;
        return log_sum_exp(terms);
      }
      Potential base(s.base);
      const double beta = s.beta;
      const double wmin = transform_w(s.base->inf(), beta);
      auto g = [&](double z) {
        return std::exp(-t * (transform_w(z, beta) - wmin));
      };
      const double i0 = base.expect(g, 1.0);
      return -t * wmin + std::log(std::max(i0, 1e-300));
    }
  }
  return 0.0;
}

bool Potential::atomic() const {
  const Impl& s = *impl_;
  if (s.family == Family::point_mass || s.family == Family::atoms) return true;
  if (s.family == Family::transformed_log) return Potential(s.base).atomic();
  return false;
}

std::vector<std::pair<double, double>> Potential::atom_list() const {
  const Impl& s = *impl_;
  switch (s.family) {
    case Family::point_mass:
      return {{s.v0, 1.0}};
    case Family::atoms: {
      std::vector<std::pair<double, double>> out;
      for (std::size_t i = 0; i < s.az.size(); ++i)
        out.emplace_back(s.az[i], s.am[i]);
      return out;
    }
    case Family::transformed_log: {
      auto base = Potential(s.base).atom_list();
      for (auto& [z, m] : base) z = transform_w(z, s.beta);
      return base;
    }
    default:
      throw std::logic_error("atom_list: continuous spec");
  }
}

}  // namespace rwrp::env
