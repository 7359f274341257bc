#include "dapkit/lattice.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "dapkit/errors.hpp"

namespace dapkit {

namespace {

// Integer site coordinates in units of a0/4.  Same-sublattice sites are
// 2*(i,j,k) with i+j+k even; opposite-sublattice sites are all-odd triples
// (2i+1,2j+1,2k+1) with i+j+k even.  |v|^2 in these units is exact, which
// makes the distance clustering immune to floating-point ties.
struct Site {
  int x, y, z;
  long long norm2() const {
    return static_cast<long long>(x) * x + static_cast<long long>(y) * y +
           static_cast<long long>(z) * z;
  }
};

void collect_sites(SublatticeRelation relation, long long max_norm2,
                   std::vector<Site>& out) {
  const int bound = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(max_norm2)))) + 1;
  if (relation == SublatticeRelation::Same || relation == SublatticeRelation::Any) {
    for (int i = -bound / 2; i <= bound / 2; ++i) {
      for (int j = -bound / 2; j <= bound / 2; ++j) {
        for (int k = -bound / 2; k <= bound / 2; ++k) {
          if ((i + j + k) % 2 != 0) continue;
          if (i == 0 && j == 0 && k == 0) continue;
          Site s{2 * i, 2 * j, 2 * k};
          if (s.norm2() <= max_norm2) out.push_back(s);
        }
      }
    }
  }
  if (relation == SublatticeRelation::Opposite || relation == SublatticeRelation::Any) {
    for (int i = -(bound + 1) / 2; i <= bound / 2; ++i) {
      for (int j = -(bound + 1) / 2; j <= bound / 2; ++j) {
        for (int k = -(bound + 1) / 2; k <= bound / 2; ++k) {
          const int rem = ((i + j + k) % 2 + 2) % 2;
          if (rem != 0) continue;
          Site s{2 * i + 1, 2 * j + 1, 2 * k + 1};
          if (s.norm2() <= max_norm2) out.push_back(s);
        }
      }
    }
  }
}

SublatticeRelation site_relation(const Site& s) {
  return (s.x % 2 == 0) ? SublatticeRelation::Same : SublatticeRelation::Opposite;
}

// |v|^2 = (a0/4)^2 * n with n = 8m' (same sublattice) or 8m'-5 (opposite).
int m_prime_from_norm2(long long n, SublatticeRelation relation) {
  return relation == SublatticeRelation::Same ? static_cast<int>(n / 8)
                                              : static_cast<int>((n + 5) / 8);
}

// The 48 signed permutations (full cubic point group).
const std::vector<std::array<std::array<int, 3>, 3>>& cubic_ops() {
  static const auto ops = [] {
    std::vector<std::array<std::array<int, 3>, 3>> v;
    int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (auto& p : perm) {
      for (int sx : {1, -1}) {
        for (int sy : {1, -1}) {
          for (int sz : {1, -1}) {
            std::array<std::array<int, 3>, 3> M{};
            const int sign[3] = {sx, sy, sz};
            for (int r = 0; r < 3; ++r) M[r][p[r]] = sign[r];
            v.push_back(M);
          }
        }
      }
    }
    return v;
  }();
  return ops;
}

Site apply(const std::array<std::array<int, 3>, 3>& M, const Site& s) {
  const int in[3] = {s.x, s.y, s.z};
  int out[3];
  for (int r = 0; r < 3; ++r) {
    out[r] = M[r][0] * in[0] + M[r][1] * in[1] + M[r][2] * in[2];
  }
  return {out[0], out[1], out[2]};
}

// Ops that map the sublattice site set onto itself.  Same-sublattice sites
// are centrosymmetric (all 48 ops); the opposite sublattice only admits the
// 24 ops fixing the nearest-neighbor tetrahedron.
std::vector<std::array<std::array<int, 3>, 3>> site_preserving_ops(SublatticeRelation rel) {
  std::vector<std::array<std::array<int, 3>, 3>> out;
  const std::array<Site, 4> tetra = {Site{1, 1, 1}, Site{1, -1, -1}, Site{-1, 1, -1},
                                     Site{-1, -1, 1}};
  for (const auto& M : cubic_ops()) {
    if (rel == SublatticeRelation::Same) {
      out.push_back(M);
      continue;
    }
    bool ok = true;
    for (const auto& t : tetra) {
      const Site m = apply(M, t);
      ok = ok && std::any_of(tetra.begin(), tetra.end(), [&](const Site& u) {
             return u.x == m.x && u.y == m.y && u.z == m.z;
           });
    }
    if (ok) out.push_back(M);
  }
  return out;
}

bool site_less(const Site& a, const Site& b) {
  if (a.x != b.x) return a.x < b.x;
  if (a.y != b.y) return a.y < b.y;
  return a.z < b.z;
}

std::vector<Site> sites_at_norm2(SublatticeRelation relation, long long n) {
  std::vector<Site> all;
  collect_sites(relation, n, all);
  std::vector<Site> out;
  for (const auto& s : all) {
    if (s.norm2() == n) out.push_back(s);
  }
  std::sort(out.begin(), out.end(), site_less);
  return out;
}

}  // namespace

double LatticeSpec::nearest_neighbor() const { return a0 * std::sqrt(3.0) / 4.0; }

SublatticeRelation relation_from_string(const std::string& s) {
  if (s == "same-sublattice" || s == "same") return SublatticeRelation::Same;
  if (s == "opposite-sublattice" || s == "opposite") return SublatticeRelation::Opposite;
  if (s == "any") return SublatticeRelation::Any;
  throw ValidationError("relation",
                        "'" + s + "' is not one of {same-sublattice, opposite-sublattice, any}");
}

std::string to_string(SublatticeRelation r) {
  switch (r) {
    case SublatticeRelation::Same: return "same-sublattice";
    case SublatticeRelation::Opposite: return "opposite-sublattice";
    default: return "any";
  }
}

SublatticeRelation pair_relation(const HostMaterial& host, const DefectSpecies& donor,
                                 const DefectSpecies& acceptor) {
  if (host.lattice_kind == LatticeKind::DiamondStructure) return SublatticeRelation::Any;
  return donor.site == acceptor.site ? SublatticeRelation::Same
                                     : SublatticeRelation::Opposite;
}

std::vector<Shell> enumerate_shells(const LatticeSpec& lattice,
                                    SublatticeRelation relation, double r_max) {
  const double a0 = lattice.a0;
  if (!(a0 > 0.0)) throw DomainError("enumerate_shells: a0 must be > 0");
  if (!(r_max > 0.0)) throw DomainError("enumerate_shells: R_max must be > 0");
  if (r_max > 50.0 * a0) {
    throw ResourceError("enumerate_shells: R_max exceeds the 50*a0 enumeration guard");
  }

  // Margin of one conventional cell; the unit of site coordinates is a0/4.
  const double reach = (r_max + a0) * 4.0 / a0;
  const long long max_norm2 = static_cast<long long>(std::ceil(reach * reach));
  std::vector<Site> sites;
  collect_sites(relation, max_norm2, sites);

  std::sort(sites.begin(), sites.end(), [](const Site& a, const Site& b) {
    if (a.norm2() != b.norm2()) return a.norm2() < b.norm2();
    return site_less(a, b);
  });

  const double scale = a0 / 4.0;
  const double tol = 1.0e-6 * a0;
  std::vector<Shell> shells;
  double prev_r = -1.0;
  for (const auto& s : sites) {
    const double r = scale * std::sqrt(static_cast<double>(s.norm2()));
    if (r > r_max + tol) break;
    if (shells.empty() || r - prev_r > tol) {
      Shell sh;
      sh.m = static_cast<int>(shells.size()) + 1;
      sh.radius = r;
      sh.multiplicity = 1;
      sh.relation = site_relation(s);
      sh.m_prime = m_prime_from_norm2(s.norm2(), sh.relation);
      shells.push_back(sh);
      prev_r = r;
    } else {
      shells.back().multiplicity += 1;
    }
  }
  return shells;
}

std::optional<double> shell_distance_closed_form(int m_prime, SublatticeRelation relation,
                                                 double a0) {
  if (m_prime < 1) throw DomainError("shell_distance_closed_form: m_prime must be >= 1");
  if (!(a0 > 0.0)) throw DomainError("shell_distance_closed_form: a0 must be > 0");
  if (relation == SublatticeRelation::Any) {
    throw DomainError("shell_distance_closed_form: relation must be same or opposite");
  }
  if (quadratic_form_multiplicity(m_prime, relation) == 0) return std::nullopt;
  const double arg = relation == SublatticeRelation::Same
                         ? 0.5 * m_prime
                         : 0.5 * m_prime - 5.0 / 16.0;
  return a0 * std::sqrt(arg);
}

int quadratic_form_multiplicity(int m_prime, SublatticeRelation relation) {
  if (m_prime < 1) throw DomainError("quadratic_form_multiplicity: m_prime must be >= 1");
  if (relation == SublatticeRelation::Any) {
    throw DomainError("quadratic_form_multiplicity: relation must be same or opposite");
  }
  const long long n = relation == SublatticeRelation::Same ? 8LL * m_prime
                                                           : 8LL * m_prime - 5;
  return static_cast<int>(sites_at_norm2(relation, n).size());
}

PairGeometry pair_orientations(const LatticeSpec& lattice, const Shell& shell) {
  const double a0 = lattice.a0;
  const long long n = shell.relation == SublatticeRelation::Same
                          ? 8LL * shell.m_prime
                          : 8LL * shell.m_prime - 5;
  const std::vector<Site> sites = sites_at_norm2(shell.relation, n);

  PairGeometry geom;
  geom.vectors.reserve(sites.size());
  const double scale = a0 / 4.0;
  for (const auto& s : sites) {
    geom.vectors.push_back({scale * s.x, scale * s.y, scale * s.z});
  }

  // Orbit partition (union-find) under the site-preserving point operations.
  std::vector<int> parent(sites.size());
  for (size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  auto index_of = [&](const Site& s) -> int {
    const auto it = std::lower_bound(sites.begin(), sites.end(), s, site_less);
    return static_cast<int>(it - sites.begin());
  };
  for (const auto& M : site_preserving_ops(shell.relation)) {
    for (size_t i = 0; i < sites.size(); ++i) {
      const int j = index_of(apply(M, sites[i]));
      const int ri = find(static_cast<int>(i));
      const int rj = find(j);
      if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
    }
  }

  geom.orbit_of.resize(sites.size());
  std::vector<int> label(sites.size(), -1);
  int next = 0;
  for (size_t i = 0; i < sites.size(); ++i) {
    const int root = find(static_cast<int>(i));
    if (label[root] < 0) label[root] = next++;
    geom.orbit_of[i] = label[root];
  }
  geom.orbit_count = next;
  return geom;
}

}  // namespace dapkit
