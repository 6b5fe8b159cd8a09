#pragma once

// Finite p-groups (abstract models and quotients of the pro-p Iwahori group),
// their group algebras over F_p, and the augmentation-ideal and monomial
// filtrations on them.

#include <climits>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"

#include "iwahori_gr/error.hpp"
#include "iwahori_gr/iwahori_group.hpp"
#include "iwahori_gr/linalg.hpp"

namespace iwahori_gr {

using GroupKey = std::vector<std::int64_t>;

struct GroupKeyHash {
  std::size_t operator()(const GroupKey& k) const {
    std::size_t h = k.size();
    for (auto v : k) h ^= std::hash<std::int64_t>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

inline constexpr std::size_t kDefaultGroupCap = 15625;

/// Largest group order that will be enumerated; IWAHORI_GR_GROUP_CAP overrides.
inline std::size_t group_cap() {
  const char* env = std::getenv("IWAHORI_GR_GROUP_CAP");
  if (env == nullptr || *env == '\0') return kDefaultGroupCap;
  char* end = nullptr;
  const long long v = std::strtoll(env, &end, 10);
  if (*end != '\0' || v <= 0) throw Error(ErrorCode::BadIndex, "IWAHORI_GR_GROUP_CAP must be a positive integer");
  return static_cast<std::size_t>(v);
}

/// A group given by canonical keys and a multiplication on them.
struct GroupModel {
  std::string name;
  std::int64_t p = 0;
  GroupKey identity;
  std::vector<GroupKey> generators;
  std::vector<std::string> generator_labels;
  std::function<GroupKey(const GroupKey&, const GroupKey&)> multiply;
};

inline GroupModel cyclic_model(std::int64_t p) {
  GroupModel m;
  m.name = "C" + std::to_string(p);
  m.p = p;
  m.identity = {0};
  m.generators = {{1}};
  m.generator_labels = {"g"};
  m.multiply = [p](const GroupKey& a, const GroupKey& b) { return GroupKey{(a[0] + b[0]) % p}; };
  return m;
}

/// (Z/p)^rank.
inline GroupModel elementary_abelian_model(std::int64_t p, int rank) {
  GroupModel m;
  m.name = "C" + std::to_string(p) + "^" + std::to_string(rank);
  m.p = p;
  m.identity.assign(rank, 0);
  for (int i = 0; i < rank; ++i) {
    GroupKey g(rank, 0);
    g[i] = 1;
    m.generators.push_back(g);
    m.generator_labels.push_back("g" + std::to_string(i));
  }
  m.multiply = [p](const GroupKey& a, const GroupKey& b) {
    GroupKey c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = (a[i] + b[i]) % p;
    return c;
  };
  return m;
}

/// Upper unitriangular 3x3 matrices over Z/p: (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab').
inline GroupModel heisenberg_model(std::int64_t p) {
  GroupModel m;
  m.name = "Heisenberg(" + std::to_string(p) + ")";
  m.p = p;
  m.identity = {0, 0, 0};
  m.generators = {{1, 0, 0}, {0, 1, 0}};
  m.generator_labels = {"x", "y"};
  m.multiply = [p](const GroupKey& a, const GroupKey& b) {
    return GroupKey{(a[0] + b[0]) % p, (a[1] + b[1]) % p, (a[2] + b[2] + a[0] * b[1]) % p};
  };
  return m;
}

/// Enumerated finite p-group. Element 0 is the identity; elements are stored in
/// breadth-first order for left multiplication by the generators.
class FiniteGroup {
 public:
  explicit FiniteGroup(GroupModel model, std::size_t cap = group_cap()) : model_(std::move(model)) {
    if (!is_prime(model_.p)) throw Error(ErrorCode::NonPrime, "group models need a prime p");
    const std::size_t ngens = model_.generators.size();
    index_.emplace(model_.identity, 0);
    keys_.push_back(model_.identity);
    parent_.push_back({-1, 0});
    left_.assign(ngens, {});
    for (std::size_t i = 0; i < keys_.size(); ++i) {
      for (std::size_t s = 0; s < ngens; ++s) {
        auto prod = model_.multiply(model_.generators[s], keys_[i]);
        auto [it, fresh] = index_.try_emplace(std::move(prod), keys_.size());
        if (fresh) {
          if (keys_.size() >= cap)
            throw Error(ErrorCode::GroupTooLarge,
                        model_.name + " has more than " + std::to_string(cap) + " elements");
          keys_.push_back(it->first);
          parent_.push_back({static_cast<int>(s), i});
        }
        left_[s].push_back(it->second);
      }
    }
    std::size_t n = keys_.size();
    while (n % static_cast<std::size_t>(model_.p) == 0) n /= static_cast<std::size_t>(model_.p);
    if (n != 1) throw Error(ErrorCode::PropertyViolation, model_.name + " is not a p-group");
    for (const auto& g : model_.generators) gens_.push_back(index_of(g));
  }

  const std::string& name() const { return model_.name; }
  std::int64_t p() const { return model_.p; }
  std::size_t order() const { return keys_.size(); }
  std::size_t num_generators() const { return gens_.size(); }
  std::size_t generator(std::size_t s) const { return gens_.at(s); }
  const std::string& generator_label(std::size_t s) const { return model_.generator_labels.at(s); }

  /// Index of generator(s) * g.
  std::size_t left(std::size_t s, std::size_t g) const { return left_[s][g]; }

  /// Spanning-tree edge reaching g: (generator, predecessor), or (-1, 0) at the identity.
  std::pair<int, std::size_t> parent(std::size_t g) const { return parent_[g]; }

  const GroupKey& key(std::size_t i) const { return keys_.at(i); }

  std::size_t index_of(const GroupKey& k) const {
    auto it = index_.find(k);
    if (it == index_.end()) throw Error(ErrorCode::BadIndex, "key outside " + model_.name);
    return it->second;
  }

  std::size_t multiply(std::size_t a, std::size_t b) const { return index_of(model_.multiply(keys_[a], keys_[b])); }

  std::size_t power(std::size_t a, std::uint64_t k) const {
    std::size_t result = 0, base = a;
    for (; k > 0; k >>= 1) {
      if (k & 1) result = multiply(result, base);
      if (k > 1) base = multiply(base, base);
    }
    return result;
  }

  std::size_t inverse(std::size_t a) const { return power(a, element_order(a) - 1); }

  std::size_t element_order(std::size_t a) const {
    std::size_t n = 1;
    for (std::size_t x = a; x != 0; x = power(x, static_cast<std::uint64_t>(model_.p))) n *= static_cast<std::size_t>(model_.p);
    return a == 0 ? 1 : n;
  }

  std::size_t commutator(std::size_t a, std::size_t b) const {
    return multiply(multiply(a, b), multiply(inverse(a), inverse(b)));
  }

 private:
  GroupModel model_;
  std::vector<GroupKey> keys_;
  std::unordered_map<GroupKey, std::size_t, GroupKeyHash> index_;
  std::vector<std::pair<int, std::size_t>> parent_;
  std::vector<std::vector<std::size_t>> left_;
  std::vector<std::size_t> gens_;
};

/// Sparse element of F_p[G].
class GroupAlgebraElement {
 public:
  explicit GroupAlgebraElement(const FiniteGroup& g) : g_(&g) {}

  static GroupAlgebraElement basis(const FiniteGroup& g, std::size_t i) {
    GroupAlgebraElement x(g);
    x.add(i, 1);
    return x;
  }

  /// [g] - [1].
  static GroupAlgebraElement minus_one(const FiniteGroup& g, std::size_t i) {
    GroupAlgebraElement x(g);
    x.add(i, 1);
    x.add(0, -1);
    return x;
  }

  const FiniteGroup& group() const { return *g_; }
  const std::map<std::size_t, std::uint32_t>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(std::size_t i, std::int64_t c) {
    const std::int64_t p = g_->p();
    const std::int64_t v = ((c % p) + p) % p;
    if (v == 0) return;
    auto it = terms_.find(i);
    if (it == terms_.end()) {
      terms_.emplace(i, static_cast<std::uint32_t>(v));
      return;
    }
    it->second = static_cast<std::uint32_t>((it->second + v) % p);
    if (it->second == 0) terms_.erase(it);
  }

  GroupAlgebraElement& operator+=(const GroupAlgebraElement& o) {
    for (const auto& [i, c] : o.terms_) add(i, c);
    return *this;
  }
  GroupAlgebraElement& operator-=(const GroupAlgebraElement& o) {
    for (const auto& [i, c] : o.terms_) add(i, -static_cast<std::int64_t>(c));
    return *this;
  }
  friend GroupAlgebraElement operator+(GroupAlgebraElement a, const GroupAlgebraElement& b) { return a += b; }
  friend GroupAlgebraElement operator-(GroupAlgebraElement a, const GroupAlgebraElement& b) { return a -= b; }

  friend GroupAlgebraElement operator*(const GroupAlgebraElement& a, const GroupAlgebraElement& b) {
    GroupAlgebraElement out(*a.g_);
    for (const auto& [i, c] : a.terms_)
      for (const auto& [j, d] : b.terms_)
        out.add(a.g_->multiply(i, j), static_cast<std::int64_t>(c) * d);
    return out;
  }

  friend bool operator==(const GroupAlgebraElement& a, const GroupAlgebraElement& b) { return a.terms_ == b.terms_; }

  /// Sum of x_g f(g).
  std::uint32_t pair(const FpRow& f) const {
    std::uint64_t s = 0;
    for (const auto& [i, c] : terms_) s += static_cast<std::uint64_t>(c) * f[i];
    return static_cast<std::uint32_t>(s % static_cast<std::uint64_t>(g_->p()));
  }

 private:
  const FiniteGroup* g_;
  std::map<std::size_t, std::uint32_t> terms_;
};

/// Type-A pro-p Iwahori group reduced modulo the congruence kernel at the context
/// precision, or modulo the filtration subgroup I_{c/h} for a scaled cutoff c.
/// Elements are stored with every coordinate truncated to the precision that the
/// kernel does not see.
class IwahoriQuotient {
 public:
  explicit IwahoriQuotient(Context ctx, std::optional<std::int64_t> scaled_cutoff = std::nullopt)
      : ctx_(std::move(ctx)), cutoff_(scaled_cutoff) {
    if (ctx_->rs.type() != 'A')
      throw Error(ErrorCode::UnsupportedType, "finite quotients are built from the type-A matrix model");
    const int h = ctx_->h();
    const int N = ctx_->ring->N;
    auto threshold = [&](int ht, int floor) {
      if (!cutoff_) return N;
      int v = floor;
      while (static_cast<std::int64_t>(h) * v + ht < *cutoff_) ++v;
      return v;
    };
    for (int i = 0; i < ctx_->rs.num_roots(); ++i) {
      const int v = threshold(ctx_->rs.height(i), ctx_->rs.delta(i));
      root_threshold_.push_back(v);
      kernel_grade_ = std::min(kernel_grade_, static_cast<std::int64_t>(h) * v + ctx_->rs.height(i));
    }
    torus_threshold_ = threshold(0, 1);
    if (ctx_->torus_rank() > 0) kernel_grade_ = std::min(kernel_grade_, static_cast<std::int64_t>(h) * torus_threshold_);
    for (int v : root_threshold_)
      if (v > N) throw Error(ErrorCode::PrecisionExceeded, "cutoff needs more than p^" + std::to_string(N));
    if (torus_threshold_ > N) throw Error(ErrorCode::PrecisionExceeded, "cutoff needs more than p^" + std::to_string(N));
  }

  const Context& context() const { return ctx_; }
  std::optional<std::int64_t> cutoff() const { return cutoff_; }

  /// h * (lower bound for omega on the kernel); the quotient sees m^j faithfully for j up to this.
  std::int64_t kernel_grade() const { return kernel_grade_; }

  int root_threshold(int i) const { return root_threshold_.at(i); }
  int torus_threshold() const { return torus_threshold_; }

  /// log_p of the order, by counting coordinate residues.
  int expected_order_exponent() const {
    const int f = ctx_->ring->f;
    int e = 0;
    for (int i = 0; i < ctx_->rs.num_roots(); ++i) e += f * (root_threshold_[i] - ctx_->rs.delta(i));
    e += ctx_->torus_rank() * f * (torus_threshold_ - 1);
    return e;
  }

  std::string name() const {
    std::string s = "I(" + ctx_->rs.label();
    if (ctx_->central_rank > 0) s += "+Z" + std::to_string(ctx_->central_rank);
    s += ", p=" + std::to_string(ctx_->ring->p) + ", f=" + std::to_string(ctx_->ring->f) +
         ", N=" + std::to_string(ctx_->ring->N) + ")";
    if (cutoff_) s += "/I_" + std::to_string(*cutoff_) + "/" + std::to_string(ctx_->h());
    return s;
  }

  IwahoriElement truncate(const IwahoriElement& e) const { return decode(encode(e)); }

  GroupKey encode(const IwahoriElement& e) const {
    GroupKey k;
    const int f = ctx_->ring->f;
    for (int i = 0; i < ctx_->rs.num_roots(); ++i) {
      const auto x = e.root_coord(i).reduced_mod_p_power(root_threshold_[i]);
      for (int t = 0; t < f; ++t) k.push_back(x.coeff(t));
    }
    for (int b = 0; b < ctx_->torus_rank(); ++b) {
      const auto t = e.torus_coord(b).reduced_mod_p_power(torus_threshold_);
      for (int c = 0; c < f; ++c) k.push_back(t.coeff(c));
    }
    return k;
  }

  IwahoriElement decode(const GroupKey& k) const {
    IwahoriElement e(ctx_);
    const int f = ctx_->ring->f;
    std::size_t pos = 0;
    auto next = [&] {
      std::vector<std::int64_t> c(k.begin() + static_cast<std::ptrdiff_t>(pos), k.begin() + static_cast<std::ptrdiff_t>(pos + f));
      pos += static_cast<std::size_t>(f);
      return TruncatedUnramified::from_coeffs(ctx_->ring, c);
    };
    for (int i = 0; i < ctx_->rs.num_roots(); ++i) e.set_root(i, next());
    for (int b = 0; b < ctx_->torus_rank(); ++b) e.set_torus(b, next());
    return e;
  }

  /// u_gamma(p^delta [xi]^r) for gamma of height class 1, and lambda(1 + p[xi]^r)
  /// for the central basis cocharacters.
  std::vector<std::pair<std::string, IwahoriElement>> generators() const {
    std::vector<std::pair<std::string, IwahoriElement>> out;
    const Ring& ring = ctx_->ring;
    for (int i = 0; i < ctx_->rs.num_roots(); ++i) {
      if (ctx_->rs.height_class_of(i) != 1) continue;
      for (int r = 0; r < ring->f; ++r)
        out.emplace_back(root_label(ctx_->rs, i) + ":r=" + std::to_string(r),
                         IwahoriElement::root_element(ctx_, i, teichmuller(r, ring) * p_power_element(ring, ctx_->rs.delta(i))));
    }
    const auto lat = ctx_->lattice();
    for (int b = ctx_->rs.rank(); b < ctx_->torus_rank(); ++b)
      for (int r = 0; r < ring->f; ++r)
        out.emplace_back(lat.basis_label(b) + ":r=" + std::to_string(r),
                         IwahoriElement::torus_element(ctx_, b, TruncatedUnramified::one(ring) + teichmuller(r, ring) * p_power_element(ring, 1)));
    return out;
  }

  GroupModel model() const {
    GroupModel m;
    m.name = name();
    m.p = ctx_->ring->p;
    m.identity = encode(IwahoriElement::identity(ctx_));
    for (const auto& [label, e] : generators()) {
      m.generators.push_back(encode(e));
      m.generator_labels.push_back(label);
    }
    m.multiply = [q = *this](const GroupKey& a, const GroupKey& b) {
      return q.encode(iwahori_gr::multiply(q.decode(a), q.decode(b)));
    };
    return m;
  }

 private:
  Context ctx_;
  std::optional<std::int64_t> cutoff_;
  std::vector<int> root_threshold_;
  int torus_threshold_ = 1;
  std::int64_t kernel_grade_ = INT64_MAX;
};

/// Enumerates the quotient from its generators and checks the order against the
/// coordinate count.
inline FiniteGroup enumerate(const IwahoriQuotient& q, std::size_t cap = group_cap()) {
  const int e = q.expected_order_exponent();
  const std::int64_t p = q.context()->ring->p;
  if (e >= 62 || int_pow(p, e) > static_cast<std::int64_t>(cap))
    throw Error(ErrorCode::GroupTooLarge, q.name() + " has order " + std::to_string(p) + "^" + std::to_string(e));
  FiniteGroup g(q.model(), cap);
  if (static_cast<std::int64_t>(g.order()) != int_pow(p, e))
    throw Error(ErrorCode::PropertyViolation, q.name() + ": generators reach " + std::to_string(g.order()) +
                                                  " elements, expected " + std::to_string(p) + "^" + std::to_string(e));
  return g;
}


/// Powers of the augmentation ideal m of F_p[G], held through their annihilators
/// ann(m^n) in the space of functions G -> F_p. A function lies in ann(m^{n+1})
/// iff f(s.) - f lies in ann(m^n) for every generator s, so each level is a
/// nullspace whose size is governed by the codimension rather than by |G|.
class AugmentationLadder {
 public:
  AugmentationLadder(const FiniteGroup& g, int n_max) : g_(&g), span_(g.p(), g.order()) {
    if (n_max < 1) throw Error(ErrorCode::BadIndex, "ladder needs n_max >= 1");
    const std::size_t G = g.order();
    codim_.push_back(0);
    push(FpRow(G, 1));
    codim_.push_back(funcs_.size());
    top_ = 1;
    while (top_ < n_max && codim_[top_] < G) {
      extend();
      ++top_;
    }
    complete_ = codim_[top_] == G;
  }

  const FiniteGroup& group() const { return *g_; }

  /// m^n is known exactly for n <= top().
  int top() const { return top_; }

  /// m^{top()} = 0.
  bool complete() const { return complete_; }

  /// dim F_p[G] / m^n.
  std::size_t codim(int n) const {
    if (n < 0) throw Error(ErrorCode::BadIndex, "negative ideal power");
    if (n > top_) {
      if (complete_) return g_->order();
      throw Error(ErrorCode::PrecisionExceeded, "m^" + std::to_string(n) + " lies beyond the computed ladder");
    }
    return codim_[static_cast<std::size_t>(n)];
  }

  /// dim m^n / m^{n+1} for n = 0 .. top()-1.
  std::vector<std::size_t> graded_dims() const {
    std::vector<std::size_t> out;
    for (int n = 0; n < top_; ++n) out.push_back(codim_[n + 1] - codim_[n]);
    return out;
  }

  bool contains(int n, const GroupAlgebraElement& x) const {
    if (n > top_) {
      if (complete_) return x.is_zero();
      throw Error(ErrorCode::PrecisionExceeded, "m^" + std::to_string(n) + " lies beyond the computed ladder");
    }
    for (std::size_t k = 0; k < codim_[static_cast<std::size_t>(std::max(n, 0))]; ++k)
      if (x.pair(funcs_[k]) != 0) return false;
    return true;
  }

  /// Largest n <= top() with x in m^n.
  int degree(const GroupAlgebraElement& x) const {
    std::size_t k = 0;
    while (k < funcs_.size() && x.pair(funcs_[k]) == 0) ++k;
    int n = 0;
    while (n < top_ && codim_[n + 1] <= k) ++n;
    return n;
  }

  /// Is f in ann(m^n)?
  bool annihilates(int n, const FpRow& f) const { return span_.contains(f, codim(n)); }

  /// Basis of ann(m^{top}); the first codim(n) entries span ann(m^n).
  const std::vector<FpRow>& functions() const { return funcs_; }

 private:
  void push(const FpRow& f) {
    if (span_.insert(f)) funcs_.push_back(f);
  }

  void extend() {
    const FiniteGroup& g = *g_;
    const std::uint32_t p = static_cast<std::uint32_t>(g.p());
    const std::size_t G = g.order(), S = g.num_generators();
    const std::size_t r = codim_[top_];
    const std::size_t u = S * r;
    // f(x) as a linear form in the unknown coefficients of (f(s.) - f) on ann(m^top),
    // normalised by f(1) = 0 and integrated along the spanning tree.
    std::vector<FpRow> form(G, FpRow(u, 0));
    for (std::size_t x = 1; x < G; ++x) {
      const auto [s, prev] = g.parent(x);
      form[x] = form[prev];
      for (std::size_t k = 0; k < r; ++k) {
        auto& c = form[x][static_cast<std::size_t>(s) * r + k];
        c = static_cast<std::uint8_t>((c + funcs_[k][prev]) % p);
      }
    }
    FpEchelon eqs(g.p(), u);
    FpRow row(u);
    for (std::size_t x = 0; x < G && eqs.rank() < u; ++x)
      for (std::size_t s = 0; s < S; ++s) {
        const std::size_t y = g.left(s, x);
        const auto par = g.parent(y);
        if (par.first == static_cast<int>(s) && par.second == x) continue;
        for (std::size_t j = 0; j < u; ++j) row[j] = static_cast<std::uint8_t>((form[y][j] + p - form[x][j]) % p);
        for (std::size_t k = 0; k < r; ++k) {
          auto& c = row[s * r + k];
          c = static_cast<std::uint8_t>((c + p - funcs_[k][x]) % p);
        }
        eqs.insert(row);
      }
    for (const auto& c : fp_nullspace(eqs)) {
      FpRow f(G, 0);
      for (std::size_t x = 0; x < G; ++x) {
        std::uint64_t v = 0;
        for (std::size_t j = 0; j < u; ++j) v += static_cast<std::uint64_t>(form[x][j]) * c[j];
        f[x] = static_cast<std::uint8_t>(v % p);
      }
      push(f);
    }
    codim_.push_back(funcs_.size());
  }

  const FiniteGroup* g_;
  FpEchelon span_;
  std::vector<FpRow> funcs_;
  std::vector<std::size_t> codim_;
  int top_ = 0;
  bool complete_ = false;
};

inline std::string ladder_csv(const AugmentationLadder& ladder) {
  std::ostringstream os;
  os << "n,dim,codim\n";
  const auto dims = ladder.graded_dims();
  for (std::size_t n = 0; n < dims.size(); ++n)
    os << n << ',' << dims[n] << ',' << ladder.codim(static_cast<int>(n)) << '\n';
  return os.str();
}

inline std::uint32_t binomial_mod_p(std::int64_t n, std::int64_t k, std::int64_t p) {
  std::uint64_t result = 1;
  while (n > 0 || k > 0) {
    const std::int64_t a = n % p, b = k % p;
    if (b > a) return 0;
    std::uint64_t num = 1, den = 1;
    for (std::int64_t i = 0; i < b; ++i) {
      num = num * static_cast<std::uint64_t>(a - i) % static_cast<std::uint64_t>(p);
      den = den * static_cast<std::uint64_t>(i + 1) % static_cast<std::uint64_t>(p);
    }
    result = result * num % static_cast<std::uint64_t>(p) * fp_inverse(static_cast<std::uint32_t>(den), static_cast<std::uint32_t>(p)) %
             static_cast<std::uint64_t>(p);
    n /= p;
    k /= p;
  }
  return static_cast<std::uint32_t>(result);
}

struct OrderedBasisElement {
  std::string label;
  std::size_t index;          // in the finite group
  std::int64_t scaled_omega;  // h * omega
  std::size_t order;
};

/// The elements u_gamma(p^delta [xi]^r) (gamma in Phi_k, 1 <= k <= h-1) and
/// lambda(1 + p[xi]^r) (lambda a simple coroot or a central basis cocharacter),
/// in that order, with every group element written uniquely as x_1^a_1 ... x_d^a_d.
class OrderedBasis {
 public:
  OrderedBasis(const IwahoriQuotient& q, const FiniteGroup& g) : g_(&g) {
    const Context& ctx = q.context();
    const Ring& ring = ctx->ring;
    const int h = ctx->h();
    std::vector<std::pair<std::string, IwahoriElement>> cand;
    for (int k = 1; k < h; ++k)
      for (int i = 0; i < ctx->rs.num_roots(); ++i) {
        if (ctx->rs.height_class_of(i) != k) continue;
        for (int r = 0; r < ring->f; ++r)
          cand.emplace_back(root_label(ctx->rs, i) + ":r=" + std::to_string(r),
                            IwahoriElement::root_element(ctx, i, teichmuller(r, ring) * p_power_element(ring, ctx->rs.delta(i))));
      }
    const auto lat = ctx->lattice();
    for (int b = 0; b < ctx->torus_rank(); ++b)
      for (int r = 0; r < ring->f; ++r)
        cand.emplace_back(lat.basis_label(b) + ":r=" + std::to_string(r),
                          IwahoriElement::torus_element(ctx, b, TruncatedUnramified::one(ring) + teichmuller(r, ring) * p_power_element(ring, 1)));
    for (const auto& [label, e] : cand) {
      const auto w = omega(e);
      if (!w.exact) throw Error(ErrorCode::PrecisionExceeded, "omega of " + label + " is only bounded at this precision");
      const std::size_t idx = g.index_of(q.encode(e));
      if (idx == 0) continue;
      elems_.push_back({label, idx, w.value.scaled, g.element_order(idx)});
    }
    build_normal_form();
  }

  const FiniteGroup& group() const { return *g_; }
  const std::vector<OrderedBasisElement>& elements() const { return elems_; }
  std::size_t size() const { return elems_.size(); }

  /// Exponents a with g = x_1^a_1 ... x_d^a_d.
  std::vector<std::int64_t> exponents(std::size_t g) const {
    const std::size_t d = elems_.size();
    return {exps_.begin() + static_cast<std::ptrdiff_t>(g * d), exps_.begin() + static_cast<std::ptrdiff_t>((g + 1) * d)};
  }

  std::size_t element_with_exponents(const std::vector<std::int64_t>& a) const {
    std::size_t pos = 0;
    for (std::size_t i = 0; i < elems_.size(); ++i) pos = pos * elems_[i].order + static_cast<std::size_t>(a[i]);
    return by_position_.at(pos);
  }

  /// h * tau(alpha) = sum of h*omega(x_i) alpha_i.
  std::int64_t weight(const std::vector<std::int64_t>& alpha) const {
    std::int64_t w = 0;
    for (std::size_t i = 0; i < elems_.size(); ++i) w += elems_[i].scaled_omega * alpha[i];
    return w;
  }

 private:
  void build_normal_form() {
    const FiniteGroup& g = *g_;
    const std::size_t d = elems_.size();
    std::size_t total = 1;
    for (const auto& e : elems_) total *= e.order;
    if (total != g.order())
      throw Error(ErrorCode::PropertyViolation, "ordered basis orders multiply to " + std::to_string(total) + ", not |G|");
    std::vector<std::vector<std::size_t>> powers(d);
    for (std::size_t i = 0; i < d; ++i) {
      powers[i].push_back(0);
      for (std::size_t a = 1; a < elems_[i].order; ++a) powers[i].push_back(g.multiply(powers[i].back(), elems_[i].index));
    }
    exps_.assign(g.order() * d, -1);
    by_position_.assign(total, 0);
    std::vector<bool> seen(g.order(), false);
    std::vector<std::int64_t> a(d, 0);
    std::vector<std::size_t> prefix(d + 1, 0);
    for (std::size_t pos = 0; pos < total; ++pos) {
      const std::size_t x = prefix[d];
      if (seen[x]) throw Error(ErrorCode::PropertyViolation, "ordered basis products are not distinct");
      seen[x] = true;
      for (std::size_t i = 0; i < d; ++i) exps_[x * d + i] = a[i];
      by_position_[pos] = x;
      std::size_t i = d;
      while (i > 0 && static_cast<std::size_t>(++a[i - 1]) == elems_[i - 1].order) a[--i] = 0;
      if (i == 0) break;
      for (std::size_t j = i - 1; j < d; ++j)
        prefix[j + 1] = g.multiply(prefix[j], powers[j][static_cast<std::size_t>(a[j])]);
    }
  }

  const FiniteGroup* g_;
  std::vector<OrderedBasisElement> elems_;
  std::vector<std::int64_t> exps_;
  std::vector<std::size_t> by_position_;
};

/// The filtration spanned by z^alpha = prod (x_i - 1)^alpha_i with h*tau(alpha) >= j.
/// Its annihilator at level j is spanned by the coordinate functionals of the
/// z^beta with h*tau(beta) < j, which on a group element x^a equal prod C(a_i, beta_i).
class OmegaMonomialFiltration {
 public:
  explicit OmegaMonomialFiltration(const OrderedBasis& b) : b_(&b) {}

  const OrderedBasis& basis() const { return *b_; }

  /// Exponent vectors with h*tau < j.
  std::vector<std::vector<std::int64_t>> monomials_below(std::int64_t j) const {
    std::vector<std::vector<std::int64_t>> out;
    std::vector<std::int64_t> alpha(b_->size(), 0);
    collect(0, 0, j, alpha, out);
    return out;
  }

  std::size_t codim(std::int64_t j) const { return monomials_below(j).size(); }

  /// dim W_j / W_{j+1} for j = 0 .. j_max.
  std::vector<std::size_t> graded_dims(std::int64_t j_max) const {
    std::vector<std::size_t> out;
    for (std::int64_t j = 0; j <= j_max; ++j) out.push_back(codim(j + 1) - codim(j));
    return out;
  }

  FpRow coordinate_functional(const std::vector<std::int64_t>& beta) const {
    const FiniteGroup& g = b_->group();
    FpRow f(g.order());
    for (std::size_t x = 0; x < g.order(); ++x) {
      const auto a = b_->exponents(x);
      std::uint64_t v = 1;
      for (std::size_t i = 0; i < a.size() && v; ++i) v = v * binomial_mod_p(a[i], beta[i], g.p()) % static_cast<std::uint64_t>(g.p());
      f[x] = static_cast<std::uint8_t>(v);
    }
    return f;
  }

  /// z^alpha expanded in group elements.
  GroupAlgebraElement monomial(const std::vector<std::int64_t>& alpha) const {
    const FiniteGroup& g = b_->group();
    GroupAlgebraElement out(g);
    const std::size_t d = alpha.size();
    std::vector<std::int64_t> a(d, 0);
    while (true) {
      std::int64_t c = 1;
      for (std::size_t i = 0; i < d; ++i) {
        c = c * binomial_mod_p(alpha[i], a[i], g.p()) % g.p();
        if ((alpha[i] - a[i]) % 2) c = (g.p() - c) % g.p();
      }
      if (c != 0) {
        std::vector<std::int64_t> red(d);
        for (std::size_t i = 0; i < d; ++i) red[i] = a[i] % static_cast<std::int64_t>(b_->elements()[i].order);
        out.add(b_->element_with_exponents(red), c);
      }
      std::size_t i = d;
      while (i > 0 && ++a[i - 1] > alpha[i - 1]) a[--i] = 0;
      if (i == 0) break;
    }
    return out;
  }

 private:
  void collect(std::size_t i, std::int64_t w, std::int64_t j, std::vector<std::int64_t>& alpha,
               std::vector<std::vector<std::int64_t>>& out) const {
    if (i == b_->size()) {
      out.push_back(alpha);
      return;
    }
    const auto& e = b_->elements()[i];
    for (std::int64_t a = 0; a < static_cast<std::int64_t>(e.order) && w + a * e.scaled_omega < j; ++a) {
      alpha[i] = a;
      collect(i + 1, w + a * e.scaled_omega, j, alpha, out);
    }
    alpha[i] = 0;
  }

  const OrderedBasis* b_;
};

struct FiltrationLevel {
  std::int64_t scaled;  // j, the level m^j against omega >= j/h
  std::size_t codim_m;
  std::size_t codim_omega;
  bool equal;
};

struct CentralWitness {
  std::string label;
  bool in_m;
  bool in_m2;
};

struct FiltrationComparison {
  std::string group;
  std::size_t order = 0;
  int h = 0;
  std::int64_t kernel_grade = 0;
  std::vector<FiltrationLevel> levels;
  std::vector<CentralWitness> central;

  bool all_equal() const {
    for (const auto& l : levels)
      if (!l.equal) return false;
    return true;
  }

  /// Some central lambda(1 + p[xi]^r) - 1 lies in m but not in m^2.
  bool central_counterexample() const {
    for (const auto& c : central)
      if (c.in_m && !c.in_m2) return true;
    return false;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["group"] = group;
    j["order"] = order;
    j["h"] = h;
    j["kernel_grade"] = kernel_grade;
    j["levels"] = nlohmann::json::array();
    for (const auto& l : levels)
      j["levels"].push_back({{"k", std::to_string(l.scaled) + "/" + std::to_string(h)},
                             {"codim_m_power", l.codim_m},
                             {"codim_omega", l.codim_omega},
                             {"equal", l.equal}});
    j["central"] = nlohmann::json::array();
    for (const auto& c : central) j["central"].push_back({{"element", c.label}, {"in_m", c.in_m}, {"in_m2", c.in_m2}});
    return j;
  }
};

/// Compares m^j with the omega-monomial filtration at level j/h for j = 1..j_max.
/// Levels above the kernel grade of the quotient are refused.
inline FiltrationComparison compare_filtrations(const IwahoriQuotient& q, const FiniteGroup& g, const AugmentationLadder& ladder,
                                                std::int64_t j_max) {
  if (j_max > q.kernel_grade())
    throw Error(ErrorCode::PrecisionExceeded, "level " + std::to_string(j_max) + " exceeds the certifiable range " +
                                                  std::to_string(q.kernel_grade()) + " of " + q.name());
  const Context& ctx = q.context();
  FiltrationComparison rep;
  rep.group = q.name();
  rep.order = g.order();
  rep.h = ctx->h();
  rep.kernel_grade = q.kernel_grade();
  const OrderedBasis basis(q, g);
  const OmegaMonomialFiltration omega_filt(basis);
  for (std::int64_t j = 1; j <= j_max; ++j) {
    FiltrationLevel lvl{j, ladder.codim(static_cast<int>(j)), 0, false};
    const auto below = omega_filt.monomials_below(j);
    lvl.codim_omega = below.size();
    lvl.equal = lvl.codim_m == lvl.codim_omega;
    for (std::size_t t = 0; lvl.equal && t < below.size(); ++t)
      lvl.equal = ladder.annihilates(static_cast<int>(j), omega_filt.coordinate_functional(below[t]));
    rep.levels.push_back(lvl);
  }
  const Ring& ring = ctx->ring;
  const auto lat = ctx->lattice();
  for (int b = ctx->rs.rank(); b < ctx->torus_rank(); ++b)
    for (int r = 0; r < ring->f; ++r) {
      const auto e = IwahoriElement::torus_element(ctx, b, TruncatedUnramified::one(ring) + teichmuller(r, ring) * p_power_element(ring, 1));
      const auto y = GroupAlgebraElement::minus_one(g, g.index_of(q.encode(e)));
      rep.central.push_back({lat.basis_label(b) + ":r=" + std::to_string(r), ladder.contains(1, y), ladder.contains(2, y)});
    }
  return rep;
}

struct MembershipCheck {
  std::string element;
  std::int64_t claimed;     // x - 1 in m^claimed
  bool trivial;             // x is the identity in the quotient
  bool member;
  std::optional<bool> sharp;  // certified outside m^{claimed+1}, when that level is known
};

struct MembershipReport {
  std::string group;
  std::vector<MembershipCheck> checks;

  bool all_members() const {
    for (const auto& c : checks)
      if (!c.member) return false;
    return true;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["group"] = group;
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
      nlohmann::json e{{"element", c.element}, {"claimed", c.claimed}, {"trivial", c.trivial}, {"member", c.member}};
      e["sharp"] = c.sharp ? nlohmann::json(*c.sharp) : nlohmann::json("uncertified");
      j["checks"].push_back(e);
    }
    return j;
  }
};

/// u_gamma(p^delta [xi]^r) - 1 in m^k for gamma in Phi_k, and
/// alpha^vee(1 + p[xi]^r) - 1 in m^h for alpha positive, read in the quotient.
/// Membership in the quotient is a necessary condition for membership upstairs.
inline MembershipReport root_and_coroot_memberships(const IwahoriQuotient& q, const FiniteGroup& g,
                                                    const AugmentationLadder& ladder) {
  const Context& ctx = q.context();
  const Ring& ring = ctx->ring;
  const int h = ctx->h();
  if (ladder.top() < h && !ladder.complete())
    throw Error(ErrorCode::PrecisionExceeded, "membership checks need the ladder through m^" + std::to_string(h));
  MembershipReport rep;
  rep.group = q.name();
  auto check = [&](const std::string& label, const IwahoriElement& e, std::int64_t claimed) {
    const std::size_t idx = g.index_of(q.encode(e));
    const auto y = GroupAlgebraElement::minus_one(g, idx);
    MembershipCheck c{label, claimed, idx == 0, ladder.contains(static_cast<int>(claimed), y), std::nullopt};
    if (claimed + 1 <= ladder.top() || ladder.complete()) c.sharp = !ladder.contains(static_cast<int>(claimed + 1), y);
    if (!c.member) throw Error(ErrorCode::MembershipFailure, label + " - 1 is not in m^" + std::to_string(claimed) + " in " + q.name());
    rep.checks.push_back(c);
  };
  for (int i = 0; i < ctx->rs.num_roots(); ++i)
    for (int r = 0; r < ring->f; ++r)
      check("u" + root_label(ctx->rs, i) + "(p^" + std::to_string(ctx->rs.delta(i)) + " xi^" + std::to_string(r) + ")",
            IwahoriElement::root_element(ctx, i, teichmuller(r, ring) * p_power_element(ring, ctx->rs.delta(i))),
            ctx->rs.height_class_of(i));
  for (int i : ctx->rs.positives())
    for (int r = 0; r < ring->f; ++r)
      check(root_label(ctx->rs, i) + "^vee(1 + p xi^" + std::to_string(r) + ")",
            IwahoriElement::cocharacter_element(ctx, ctx->rs.coroot_coeffs(i), TruncatedUnramified::one(ring) + teichmuller(r, ring) * p_power_element(ring, 1)),
            h);
  return rep;
}

/// F_0 E_r F_0^{-1} E_r^{-1} = H_r L_r^p U_r^p in SL_2 for each twist r, where
/// E_r = [[1, x], [0, 1]], F_0 = [[1, 0], [-p, 1]], H_r = diag(1 + px, (1 + px)^{-1}),
/// L_r = [[1, 0], [-px(1 + px), 1]], U_r = [[1, -x^2 (1 + px)^{-1}], [0, 1]], x = [xi]^r.
/// Returns the number of twists checked.
inline int check_coroot_commutator_identity(const Ring& ring) {
  using T = TruncatedUnramified;
  const T zero = T::zero(ring), one = T::one(ring), pe = p_power_element(ring, 1);
  auto mat = [&](const T& a, const T& b, const T& c, const T& d) {
    RingMatrix m(2, 2, zero);
    m(0, 0) = a;
    m(0, 1) = b;
    m(1, 0) = c;
    m(1, 1) = d;
    return m;
  };
  auto mpow = [&](RingMatrix m, std::int64_t k) {
    RingMatrix r = mat(one, zero, zero, one);
    for (; k > 0; --k) r = r * m;
    return r;
  };
  for (int r = 0; r < ring->f; ++r) {
    const T x = teichmuller(r, ring);
    const T u = one + pe * x;
    const T ui = u.inv_unit();
    const auto E = mat(one, x, zero, one), Ei = mat(one, -x, zero, one);
    const auto F = mat(one, zero, -pe, one), Fi = mat(one, zero, pe, one);
    const auto H = mat(u, zero, zero, ui);
    const auto L = mat(one, zero, -(pe * x * u), one);
    const auto U = mat(one, -(x * x * ui), zero, one);
    if (!(F * E * Fi * Ei == H * mpow(L, ring->p) * mpow(U, ring->p)))
      throw Error(ErrorCode::MembershipFailure, "coroot commutator identity fails for r = " + std::to_string(r));
  }
  return ring->f;
}

struct GroupRingIdentityReport {
  std::size_t samples = 0;
  std::size_t checks = 0;
  std::size_t truncated = 0;  // checked only down to the top of the ladder
};

/// Random checks in F_p[G], with degrees i, j, k of a-1, b-1, c-1 drawn below the
/// degrees certified by the ladder:
///   g^p - 1 in m^p;
///   abc - 1 = (ab-1) + (bc-1) + (ac-1) - (a-1) - (b-1) - (c-1) mod m^{i+j+k};
///   ab - 1 = (a-1) + (b-1) = ba - 1 mod m^{i+j};
///   a^{-1} - 1 = -(a-1) mod m^{2i};
///   bab^{-1}a^{-1} - 1 and aba^{-1}b^{-1} - 1 in m^{i+j}.
inline GroupRingIdentityReport check_group_ring_identities(const AugmentationLadder& ladder, std::size_t samples,
                                                           std::uint64_t seed) {
  const FiniteGroup& g = ladder.group();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, g.order() - 1);
  std::uniform_int_distribution<int> shape(0, 2);
  GroupRingIdentityReport rep;
  auto sample = [&] {
    const std::size_t x = pick(rng);
    switch (shape(rng)) {
      case 0: return g.commutator(x, pick(rng));
      case 1: return g.power(x, static_cast<std::uint64_t>(g.p()));
      default: return x;
    }
  };
  auto one_minus = [&](std::size_t x) { return GroupAlgebraElement::minus_one(g, x); };
  auto degree_below = [&](const GroupAlgebraElement& y) {
    std::uniform_int_distribution<int> d(1, std::max(1, ladder.degree(y)));
    return d(rng);
  };
  auto require = [&](int n, const GroupAlgebraElement& y, const std::string& what, std::size_t a, std::size_t b, std::size_t c) {
    ++rep.checks;
    int level = n;
    if (n > ladder.top() && !ladder.complete()) {
      level = ladder.top();
      ++rep.truncated;
    }
    if (!ladder.contains(level, y))
      throw Error(ErrorCode::PropertyViolation, what + " fails in " + g.name() + " at a=" + std::to_string(a) +
                                                    ", b=" + std::to_string(b) + ", c=" + std::to_string(c) +
                                                    " (m^" + std::to_string(n) + ")");
  };
  for (std::size_t t = 0; t < samples; ++t) {
    const std::size_t a = sample(), b = sample(), c = sample();
    const auto A = one_minus(a), B = one_minus(b), C = one_minus(c);
    const int i = degree_below(A), j = degree_below(B), k = degree_below(C);
    const std::size_t ab = g.multiply(a, b), ba = g.multiply(b, a), bc = g.multiply(b, c), ac = g.multiply(a, c);
    require(static_cast<int>(g.p()), one_minus(g.power(a, static_cast<std::uint64_t>(g.p()))), "g^p - 1 in m^p", a, b, c);
    require(i + j + k, one_minus(g.multiply(ab, c)) - one_minus(ab) - one_minus(bc) - one_minus(ac) + A + B + C,
            "triple product expansion", a, b, c);
    require(i + j, one_minus(ab) - A - B, "ab - 1 = (a-1) + (b-1)", a, b, c);
    require(i + j, one_minus(ba) - A - B, "ba - 1 = (a-1) + (b-1)", a, b, c);
    require(2 * i, one_minus(g.inverse(a)) + A, "a^-1 - 1 = -(a-1)", a, b, c);
    require(i + j, one_minus(g.commutator(b, a)), "[b, a] - 1 in m^{i+j}", a, b, c);
    require(i + j, one_minus(g.commutator(a, b)), "[a, b] - 1 in m^{i+j}", a, b, c);
    ++rep.samples;
  }
  return rep;
}

}  // namespace iwahori_gr
