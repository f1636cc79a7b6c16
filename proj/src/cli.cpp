#include "ebundle/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <map>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace ebundle {

using ordered_json = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------- cursor

class Cursor {
 public:
  Cursor(std::string text, int line, int col0) : s_(std::move(text)), line_(line), col0_(col0) {}

  void ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eof() {
    ws();
    return pos_ >= s_.size();
  }
  char peek() {
    ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void expect(char c, const std::string& what) {
    if (!accept(c)) fail(what);
  }
  std::string ident() {
    ws();
    std::size_t b = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return s_.substr(b, pos_ - b);
  }
  bool digit() { return std::isdigit(static_cast<unsigned char>(peek())) != 0; }
  /// Decimal literal; reduced into [0, p) when p != 0.
  Word number(Word p) {
    ws();
    if (!digit()) fail("integer");
    unsigned __int128 v = 0;
    bool big = false;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + static_cast<unsigned>(s_[pos_++] - '0');
      if (p) v %= p;
      if (v > static_cast<unsigned __int128>(1) << 62) big = true;
    }
    if (!p && big) fail("integer below 2^62");
    return static_cast<Word>(v);
  }
  [[noreturn]] void fail(const std::string& expected) {
    ws();
    throw ParseError(line_, col0_ + static_cast<int>(pos_), expected);
  }
  std::size_t pos() const { return pos_; }
  void seek(std::size_t p) { pos_ = p; }

 private:
  std::string s_;
  std::size_t pos_ = 0;
  int line_;
  int col0_;
};

/// Names of the tower generators of F (t, u, ...) as elements of F.
std::map<std::string, Elem> generators(const FieldPtr& F) {
  std::map<std::string, Elem> out;
  for (const Field* f = F.get(); f && !f->is_prime_field(); f = f->base().get()) out[f->variable()] = F->embed(*f, f->generator());
  return out;
}

// Value algebras for the shared expression grammar.

struct ElemAlg {
  FieldPtr F;
  std::map<std::string, Elem> gens;
  using V = Elem;
  V from_word(Word w) const { return F->from_int(static_cast<std::int64_t>(w)); }
  std::optional<V> var(const std::string& n) const {
    auto it = gens.find(n);
    if (it == gens.end()) return std::nullopt;
    return it->second;
  }
  V add(const V& a, const V& b) const { return F->add(a, b); }
  V sub(const V& a, const V& b) const { return F->sub(a, b); }
  V mul(const V& a, const V& b) const { return F->mul(a, b); }
  std::optional<V> div(const V& a, const V& b) const { return F->div(a, b); }
  V neg(const V& a) const { return F->neg(a); }
  std::optional<V> pow(const V& a, int e) const {
    return e >= 0 ? F->pow(a, static_cast<Word>(e)) : F->pow(F->inv(a), static_cast<Word>(-e));
  }
};

struct PolyAlg {
  FieldPtr F;
  std::map<std::string, Elem> gens;
  using V = Poly;
  V from_word(Word w) const { return Poly::from_int(F, static_cast<std::int64_t>(w)); }
  std::optional<V> var(const std::string& n) const {
    if (n == "x") return Poly::x(F);
    auto it = gens.find(n);
    if (it == gens.end()) return std::nullopt;
    return Poly::constant(F, it->second);
  }
  V add(const V& a, const V& b) const { return a + b; }
  V sub(const V& a, const V& b) const { return a - b; }
  V mul(const V& a, const V& b) const { return a * b; }
  std::optional<V> div(const V& a, const V& b) const {
    if (b.is_zero()) throw DivisionByZero();
    auto [q, r] = a.divmod(b);
    if (!r.is_zero()) return std::nullopt;
    return q;
  }
  V neg(const V& a) const { return -a; }
  std::optional<V> pow(const V& a, int e) const {
    if (e < 0) return std::nullopt;
    return ebundle::pow(a, e);
  }
};

struct FuncAlg {
  CurvePtr E;
  std::map<std::string, Elem> gens;
  using V = CurveFunction;
  V from_word(Word w) const { return CurveFunction::from_int(E, static_cast<std::int64_t>(w)); }
  std::optional<V> var(const std::string& n) const {
    if (n == "x") return CurveFunction::x(E);
    if (n == "y") return CurveFunction::y(E);
    auto it = gens.find(n);
    if (it == gens.end()) return std::nullopt;
    return CurveFunction::constant(E, it->second);
  }
  V add(const V& a, const V& b) const { return a + b; }
  V sub(const V& a, const V& b) const { return a - b; }
  V mul(const V& a, const V& b) const { return a * b; }
  std::optional<V> div(const V& a, const V& b) const { return a / b; }
  V neg(const V& a) const { return -a; }
  std::optional<V> pow(const V& a, int e) const { return a.pow(e); }
};

template <class Alg>
typename Alg::V parse_expr(Cursor& c, const Alg& A, Word p);

template <class Alg>
typename Alg::V parse_atom(Cursor& c, const Alg& A, Word p) {
  if (c.accept('(')) {
    auto v = parse_expr(c, A, p);
    c.expect(')', "')'");
    return v;
  }
  if (c.digit()) return A.from_word(c.number(p));
  std::size_t at = c.pos();
  c.ws();
  at = c.pos();
  std::string name = c.ident();
  if (!name.empty())
    if (auto v = A.var(name)) return *v;
  c.seek(at);
  c.fail("number, variable or '('");
}

template <class Alg>
typename Alg::V parse_factor(Cursor& c, const Alg& A, Word p) {
  auto v = parse_atom(c, A, p);
  if (c.accept('^')) {
    bool neg = c.accept('-');
    Word e = c.number(0);
    if (e > 100000) c.fail("exponent below 100000");
    auto r = A.pow(v, neg ? -static_cast<int>(e) : static_cast<int>(e));
    if (!r) c.fail("non-negative exponent");
    return *r;
  }
  return v;
}

template <class Alg>
typename Alg::V parse_term(Cursor& c, const Alg& A, Word p) {
  auto v = parse_factor(c, A, p);
  for (;;) {
    if (c.accept('*')) {
      v = A.mul(v, parse_factor(c, A, p));
    } else if (c.accept('/')) {
      std::size_t at = c.pos();
      auto d = parse_factor(c, A, p);
      auto q = A.div(v, d);
      if (!q) {
        c.seek(at);
        c.fail("exact divisor");
      }
      v = *q;
    } else {
      return v;
    }
  }
}

template <class Alg>
typename Alg::V parse_expr(Cursor& c, const Alg& A, Word p) {
  bool neg = false;
  if (c.accept('-'))
    neg = true;
  else
    c.accept('+');
  auto v = parse_term(c, A, p);
  if (neg) v = A.neg(v);
  for (;;) {
    if (c.accept('+'))
      v = A.add(v, parse_term(c, A, p));
    else if (c.accept('-'))
      v = A.sub(v, parse_term(c, A, p));
    else
      return v;
  }
}

void expect_end(Cursor& c) {
  if (!c.eof()) c.fail("end of line");
}

Elem element(Cursor& c, const FieldPtr& F) { return parse_expr(c, ElemAlg{F, generators(F)}, F->characteristic()); }

CurveFunction function(Cursor& c, const CurvePtr& E) {
  return parse_expr(c, FuncAlg{E, generators(E->field())}, E->field()->characteristic());
}

Place place(Cursor& c, const CurvePtr& E) {
  const FieldPtr& F = E->field();
  if (c.accept('(')) {
    Elem x = element(c, F);
    c.expect(',', "','");
    Elem y = element(c, F);
    c.expect(')', "')'");
    Point q = Point::affine(x, y);
    if (!E->contains(q)) throw InvalidInput("point " + E->to_string(q) + " is not on the curve");
    return place_of(*E, q);
  }
  if (c.accept('{')) {
    PolyAlg A{F, generators(F)};
    Poly m = parse_expr(c, A, F->characteristic());
    std::optional<Poly> Y;
    if (c.accept('|')) Y = parse_expr(c, A, F->characteristic());
    c.expect('}', "'}'");
    if (m.degree() < 1 || !F->is_one(m.lead()) || !is_irreducible(m))
      throw InvalidInput("place polynomial " + m.to_string("x") + " is not monic irreducible");
    for (const auto& t : places_over(*E, m)) {
      auto ty = t.y();
      if (!Y && !ty) return t;
      if (Y && ty && (*Y % m) == *ty) return t;
    }
    throw InvalidInput("no place of the curve matches {" + m.to_string("x") + (Y ? " | " + Y->to_string("x") : "") + "}");
  }
  std::size_t at = c.pos();
  c.ws();
  at = c.pos();
  if (c.ident() == "inf") return Place::infinity(F);
  c.seek(at);
  c.fail("place: inf, (x,y) or {m | Y}");
}

Divisor divisor(Cursor& c, const CurvePtr& E) {
  Divisor D;
  std::size_t at = c.pos();
  if (c.digit()) {
    Word n = c.number(0);
    if (n == 0 && c.eof()) return D;
    c.seek(at);
  }
  bool first = true;
  while (first || !c.eof()) {
    int sign = 1;
    if (c.accept('-'))
      sign = -1;
    else if (!c.accept('+') && !first)
      c.fail("'+' or '-'");
    first = false;
    int n = 1;
    if (c.digit()) {
      Word w = c.number(0);
      if (w > 1000000) c.fail("coefficient below 10^6");
      n = static_cast<int>(w);
      c.expect('*', "'*'");
    }
    D.add(place(c, E), sign * n);
  }
  return D;
}

// ---------------------------------------------------------------- job lines

struct Line {
  int no;
  std::string keyword;
  std::string rest;
  int rest_col;
};

std::vector<Line> split_lines(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string raw;
  int no = 0;
  while (std::getline(in, raw)) {
    ++no;
    if (auto h = raw.find('#'); h != std::string::npos) raw.resize(h);
    std::size_t b = raw.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    std::size_t e = b;
    while (e < raw.size() && !std::isspace(static_cast<unsigned char>(raw[e]))) ++e;
    std::size_t r = raw.find_first_not_of(" \t\r", e);
    std::string rest = r == std::string::npos ? "" : raw.substr(r);
    while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.back()))) rest.pop_back();
    out.push_back({no, raw.substr(b, e - b), rest, static_cast<int>(r == std::string::npos ? raw.size() : r) + 1});
  }
  return out;
}

Cursor cursor(const Line& l) { return Cursor(l.rest, l.no, l.rest_col); }

/// key=value tokens of the curve/ext lines, with the column of each value.
std::map<std::string, std::pair<std::string, int>> keyvalues(const Line& l) {
  std::map<std::string, std::pair<std::string, int>> out;
  std::size_t i = 0;
  const std::string& s = l.rest;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i >= s.size()) break;
    std::size_t e = i;
    while (e < s.size() && !std::isspace(static_cast<unsigned char>(s[e]))) ++e;
    std::string tok = s.substr(i, e - i);
    auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError(l.no, l.rest_col + static_cast<int>(i), "key=value");
    out[tok.substr(0, eq)] = {tok.substr(eq + 1), l.rest_col + static_cast<int>(i + eq + 1)};
    i = e;
  }
  return out;
}

std::vector<CurveFunction> function_list(const Line& l, const CurvePtr& E) {
  Cursor c = cursor(l);
  std::vector<CurveFunction> out;
  do {
    out.push_back(function(c, E));
  } while (c.accept(','));
  expect_end(c);
  return out;
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

std::string functions_text(const FunctionVector& fs) {
  std::vector<std::string> parts;
  for (const auto& f : fs) parts.push_back(f.to_string());
  return join(parts, ", ");
}

std::string kind_name(JobKind k) {
  switch (k) {
    case JobKind::DirectSum: return "direct_sum";
    case JobKind::Kernel: return "kernel";
    case JobKind::Monad: return "monad";
    case JobKind::None: break;
  }
  return "none";
}

}  // namespace

// ---------------------------------------------------------------- parse / print

Divisor parse_divisor(const CurvePtr& E, const std::string& text) {
  Cursor c(text, 1, 1);
  Divisor D = divisor(c, E);
  expect_end(c);
  return D;
}

CurveFunction parse_function(const CurvePtr& E, const std::string& text) {
  Cursor c(text, 1, 1);
  CurveFunction f = function(c, E);
  expect_end(c);
  return f;
}

Elem parse_element(const FieldPtr& F, const std::string& text) {
  Cursor c(text, 1, 1);
  Elem e = element(c, F);
  expect_end(c);
  return e;
}

JobDescription parse_job(const std::string& text) {
  static const std::vector<std::string> keywords{"curve", "ext", "mark", "summand", "ambient", "target", "g", "f", "twist", "divisor"};
  auto lines = split_lines(text);
  const Line* curve_line = nullptr;
  const Line* ext_line = nullptr;
  const Line* mark_line = nullptr;
  for (const auto& l : lines) {
    if (std::find(keywords.begin(), keywords.end(), l.keyword) == keywords.end())
      throw ParseError(l.no, 1, "keyword (" + join(keywords, ", ") + ")");
    auto once = [&](const Line*& slot) {
      if (slot) throw ParseError(l.no, 1, "a single '" + l.keyword + "' line");
      slot = &l;
    };
    if (l.keyword == "curve") once(curve_line);
    if (l.keyword == "ext") once(ext_line);
    if (l.keyword == "mark") once(mark_line);
  }
  if (!curve_line) throw ParseError(lines.empty() ? 1 : lines.front().no, 1, "a 'curve' line");

  JobDescription job;
  auto kv = keyvalues(*curve_line);
  for (const auto& [k, v] : kv)
    if (k != "p" && k != "a" && k != "b") throw ParseError(curve_line->no, v.second - static_cast<int>(k.size()) - 1, "key p, a or b");
  for (const char* k : {"p", "a", "b"})
    if (!kv.count(k)) throw ParseError(curve_line->no, curve_line->rest_col, std::string("key ") + k + "=");
  {
    Cursor c(kv["p"].first, curve_line->no, kv["p"].second);
    job.p = c.number(0);
    expect_end(c);
  }
  FieldPtr F = Field::prime(job.p);
  if (ext_line) {
    auto ek = keyvalues(*ext_line);
    if (ek.size() != 1 || !ek.count("k")) throw ParseError(ext_line->no, ext_line->rest_col, "k=<degree>");
    Cursor c(ek["k"].first, ext_line->no, ek["k"].second);
    Word k = c.number(0);
    expect_end(c);
    if (k < 1 || k > 64) throw InvalidInput("extension degree must be between 1 and 64");
    job.ext = static_cast<int>(k);
    if (job.ext > 1) F = extend(F, job.ext);
  }
  Elem a, b;
  {
    Cursor c(kv["a"].first, curve_line->no, kv["a"].second);
    a = element(c, F);
    expect_end(c);
    Cursor d(kv["b"].first, curve_line->no, kv["b"].second);
    b = element(d, F);
    expect_end(d);
  }
  job.curve = make_curve(Curve(F, a, b));
  const CurvePtr& E = job.curve;
  job.mark = Point::infinity();
  if (mark_line) {
    Cursor c = cursor(*mark_line);
    Place t = place(c, E);
    expect_end(c);
    if (t.degree() != 1) throw InvalidInput("the marked point must be rational");
    job.mark = t.is_infinity() ? Point::infinity() : t.point();
  }
  for (const auto& l : lines) {
    if (l.keyword == "curve" || l.keyword == "ext" || l.keyword == "mark") continue;
    if (l.keyword == "g") {
      if (!job.g.empty()) throw ParseError(l.no, 1, "a single 'g' line");
      job.g = function_list(l, E);
      continue;
    }
    if (l.keyword == "f") {
      job.f_rows.push_back(function_list(l, E));
      continue;
    }
    Cursor c = cursor(l);
    Divisor D = divisor(c, E);
    expect_end(c);
    if (l.keyword == "summand") {
      job.summands.push_back(D);
    } else if (l.keyword == "ambient") {
      job.ambient.push_back(D);
    } else {
      std::optional<Divisor>& slot = l.keyword == "target" ? job.target : l.keyword == "twist" ? job.twist : job.divisor;
      if (slot) throw ParseError(l.no, 1, "a single '" + l.keyword + "' line");
      slot = D;
    }
  }
  if (!job.summands.empty() && (!job.ambient.empty() || job.target || !job.g.empty() || !job.f_rows.empty()))
    throw InvalidInput("a job cannot mix summand lines with kernel or monad lines");
  if (!job.summands.empty())
    job.kind = JobKind::DirectSum;
  else if (!job.ambient.empty() || job.target || !job.g.empty())
    job.kind = job.f_rows.empty() ? JobKind::Kernel : JobKind::Monad;
  else if (!job.f_rows.empty())
    throw InvalidInput("f lines need a kernel presentation");
  return job;
}

std::string print_job(const JobDescription& job) {
  const Curve& E = *job.curve;
  std::ostringstream os;
  os << "curve p=" << job.p << " a=" << E.F().to_string(E.a()) << " b=" << E.F().to_string(E.b()) << "\n";
  if (job.ext > 1) os << "ext k=" << job.ext << "\n";
  os << "mark " << E.to_string(job.mark) << "\n";
  for (const auto& D : job.summands) os << "summand " << D.to_string() << "\n";
  for (const auto& D : job.ambient) os << "ambient " << D.to_string() << "\n";
  if (job.target) os << "target " << job.target->to_string() << "\n";
  if (!job.g.empty()) os << "g " << functions_text(job.g) << "\n";
  for (const auto& row : job.f_rows) os << "f " << functions_text(row) << "\n";
  if (job.twist) os << "twist " << job.twist->to_string() << "\n";
  if (job.divisor) os << "divisor " << job.divisor->to_string() << "\n";
  return os.str();
}

bool operator==(const JobDescription& a, const JobDescription& b) {
  return a.p == b.p && a.ext == b.ext && *a.curve == *b.curve && a.mark == b.mark && a.kind == b.kind &&
         a.summands == b.summands && a.ambient == b.ambient && a.target == b.target && a.g == b.g &&
         a.f_rows == b.f_rows && a.twist == b.twist && a.divisor == b.divisor;
}

// ---------------------------------------------------------------- semantics

DirectSumPresentation direct_sum_of(const JobDescription& job) {
  if (job.kind != JobKind::DirectSum) throw InvalidInput("job is not a direct sum");
  DirectSumPresentation P{job.curve, job.mark, job.summands};
  P.validate();
  return P;
}

KernelPresentation kernel_of(const JobDescription& job) {
  if (job.kind != JobKind::Kernel && job.kind != JobKind::Monad) throw InvalidInput("job is not a kernel presentation");
  if (!job.target) throw InvalidInput("kernel presentation without a target line");
  KernelPresentation K{job.curve, job.mark, job.ambient, *job.target, job.g};
  K.validate();
  return K;
}

MonadPresentation monad_of(const JobDescription& job) {
  if (job.kind != JobKind::Monad) throw InvalidInput("job is not a monad");
  MonadPresentation M{kernel_of(job), {}};
  if (static_cast<int>(job.f_rows.size()) != M.kernel.m())
    throw InvalidInput("f has " + std::to_string(job.f_rows.size()) + " rows for " + std::to_string(M.kernel.m()) + " ambient summands");
  const std::size_t s = job.f_rows.front().size();
  for (const auto& row : job.f_rows)
    if (row.size() != s) throw InvalidInput("rows of f have different lengths");
  M.f.assign(s, FunctionVector{});
  for (const auto& row : job.f_rows)
    for (std::size_t j = 0; j < s; ++j) M.f[j].push_back(row[j]);
  M.validate();
  return M;
}

SectionSystem section_system(const JobDescription& job, const Divisor& twist) {
  switch (job.kind) {
    case JobKind::DirectSum: return sections_direct_sum(direct_sum_of(job), twist);
    case JobKind::Kernel: return sections_kernel(kernel_of(job), twist);
    case JobKind::Monad: return sections_monad(monad_of(job), twist);
    case JobKind::None: break;
  }
  throw InvalidInput("job has no presentation");
}

// ---------------------------------------------------------------- analyze

Report cmd_analyze(const JobDescription& job, const std::optional<Divisor>& twist) {
  const Curve& E = *job.curve;
  Divisor T = twist ? *twist : job.effective_twist();
  if (T.degree() < 1) throw InvalidInput("the twist must have positive degree");
  if (T.degree() > 1 && job.kind != JobKind::DirectSum)
    throw InvalidInput("twists of degree > 1 are supported for direct sums only");
  const Divisor main_twist = T.degree() == 1 ? T : default_twist(E, job.mark);

  SectionSystem S = section_system(job, main_twist);
  StabilityReport rep = splitting_type(S);
  FullySplitReport fs = fully_split_test(S);

  Report R;
  R.curve = E.to_string();
  R.mark = E.to_string(job.mark);
  R.kind = kind_name(job.kind);
  R.twist = main_twist.to_string();
  R.rank = rep.rank;
  R.section_count = rep.section_count;
  R.verdict = to_string(rep.verdict);
  R.reason = to_string(rep.reason);
  R.test_verdict = to_string(fs.verdict);
  R.test_fully_split = fs.fully_split;
  R.test_failed_condition = fs.failed_condition;
  if (rep.semistable()) {
    const Curve& EL = *rep.split_curve;
    R.spectral = rep.spectral.to_string();
    R.split_field = EL.field()->describe();
    R.spectral_points = rep.spectral_points.to_string();
    R.fully_split = rep.fully_split;
    for (const auto& f : rep.splitting) R.splitting.push_back({EL.to_string(f.point), f.rank});
    for (const auto& pa : rep.points)
      R.places.push_back({pa.place.to_string(), EL.to_string(pa.point), pa.multiplicity, pa.wedge.delta, pa.wedge.exponents,
                          pa.wedge.tower, pa.kernel.d, pa.kernel.limit_rank});
    R.max_vanishing = rep.max_vanishing;
    R.max_incidence = rep.max_incidence;
    R.incidence_checks = rep.incidence_checks;
  }
  if (job.kind == JobKind::Monad && rep.semistable()) {
    MonadPresentation M = monad_of(job);
    MonadRow row;
    row.s = M.s();
    Divisor cohomology;
    for (const auto& f : rep.splitting) cohomology.add(place_of(*rep.split_curve, f.point), f.rank);
    cohomology = descend(E, *rep.split_curve, cohomology);
    row.cohomology_spectral = cohomology.to_string();
    try {
      Divisor kernel_sigma = spectral_divisor(sections_kernel(M.kernel, main_twist));
      row.kernel_spectral = kernel_sigma.to_string();
      row.difference = (kernel_sigma - cohomology).to_string();
    } catch (const SectionCountMismatch& e) {
      row.kernel_spectral = row.difference = "unavailable: " + std::string(e.what());
    } catch (const TopWedgeVanishes& e) {
      row.kernel_spectral = row.difference = "unavailable: " + std::string(e.what());
    }
    R.monad = row;
  }
  if (T.degree() > 1) {
    std::vector<Point> pts;
    for (const auto& [t, n] : T.terms()) {
      if (n != 1 || t.degree() != 1) throw InvalidInput("a general twist must be a sum of distinct rational points");
      Point q = t.is_infinity() ? Point::infinity() : t.point();
      if (q == job.mark)
        pts.insert(pts.begin(), q);
      else
        pts.push_back(q);
    }
    TwistRow row;
    row.twist = T.to_string();
    try {
      auto g = general_twist_spectral(direct_sum_of(job), pts);
      row.dim_g = g.dim_g;
      row.canonical_basis = g.canonical_basis;
      row.spectral = g.spectral.to_string();
    } catch (const DimensionMismatch& e) {
      row.dim_g = e.got();
      row.spectral = "unavailable: " + std::string(e.what());
    } catch (const TopWedgeVanishes& e) {
      row.spectral = "unavailable: " + std::string(e.what());
    }
    R.general_twist = row;
  }
  return R;
}

int exit_code(const Report& r) { return r.semistable() ? 0 : 2; }

std::string splitting_shape(const Report& r) {
  if (!r.semistable()) return "-";
  std::vector<int> ranks;
  for (const auto& f : r.splitting) ranks.push_back(f.rank);
  std::sort(ranks.rbegin(), ranks.rend());
  std::vector<std::string> parts;
  for (int k : ranks) parts.push_back(std::to_string(k));
  return parts.empty() ? "0" : join(parts, "+");
}

// ---------------------------------------------------------------- serialization

namespace {

ordered_json to_json(const Report& r) {
  ordered_json j;
  j["curve"] = r.curve;
  j["mark"] = r.mark;
  j["kind"] = r.kind;
  j["twist"] = r.twist;
  j["rank"] = r.rank;
  j["section_count"] = r.section_count;
  j["verdict"] = r.verdict;
  j["reason"] = r.reason;
  j["spectral_divisor"] = r.spectral;
  j["split_field"] = r.split_field;
  j["spectral_points"] = r.spectral_points;
  j["fully_split"] = r.fully_split;
  j["splitting"] = ordered_json::array();
  for (const auto& f : r.splitting) j["splitting"].push_back({{"point", f.point}, {"rank", f.rank}});
  j["places"] = ordered_json::array();
  for (const auto& p : r.places)
    j["places"].push_back({{"place", p.place},
                           {"point", p.point},
                           {"multiplicity", p.multiplicity},
                           {"delta", p.delta},
                           {"exponents", p.exponents},
                           {"tower", p.tower},
                           {"kernel_dimension", p.kernel_dimension},
                           {"limit_rank", p.limit_rank}});
  j["fully_split_test"] = {{"verdict", r.test_verdict},
                           {"fully_split", r.test_fully_split},
                           {"failed_condition", r.test_failed_condition}};
  j["slope_bound"] = {{"max_vanishing", r.max_vanishing}, {"max_incidence", r.max_incidence}, {"frame_checks", r.incidence_checks}};
  if (r.monad)
    j["monad"] = {{"s", r.monad->s},
                  {"kernel_spectral", r.monad->kernel_spectral},
                  {"cohomology_spectral", r.monad->cohomology_spectral},
                  {"difference", r.monad->difference}};
  if (r.general_twist)
    j["general_twist"] = {{"twist", r.general_twist->twist},
                          {"dim_g", r.general_twist->dim_g},
                          {"canonical_basis", r.general_twist->canonical_basis},
                          {"spectral_divisor", r.general_twist->spectral}};
  return j;
}

Report from_json(const ordered_json& j) {
  Report r;
  r.curve = j.at("curve").get<std::string>();
  r.mark = j.at("mark").get<std::string>();
  r.kind = j.at("kind").get<std::string>();
  r.twist = j.at("twist").get<std::string>();
  r.rank = j.at("rank").get<int>();
  r.section_count = j.at("section_count").get<int>();
  r.verdict = j.at("verdict").get<std::string>();
  r.reason = j.at("reason").get<std::string>();
  r.spectral = j.at("spectral_divisor").get<std::string>();
  r.split_field = j.at("split_field").get<std::string>();
  r.spectral_points = j.at("spectral_points").get<std::string>();
  r.fully_split = j.at("fully_split").get<bool>();
  for (const auto& f : j.at("splitting")) r.splitting.push_back({f.at("point").get<std::string>(), f.at("rank").get<int>()});
  for (const auto& p : j.at("places"))
    r.places.push_back({p.at("place").get<std::string>(), p.at("point").get<std::string>(), p.at("multiplicity").get<int>(),
                        p.at("delta").get<std::vector<int>>(), p.at("exponents").get<std::vector<int>>(),
                        p.at("tower").get<std::vector<int>>(), p.at("kernel_dimension").get<int>(),
                        p.at("limit_rank").get<int>()});
  const auto& t = j.at("fully_split_test");
  r.test_verdict = t.at("verdict").get<std::string>();
  r.test_fully_split = t.at("fully_split").get<bool>();
  r.test_failed_condition = t.at("failed_condition").get<std::string>();
  const auto& sb = j.at("slope_bound");
  r.max_vanishing = sb.at("max_vanishing").get<int>();
  r.max_incidence = sb.at("max_incidence").get<int>();
  r.incidence_checks = sb.at("frame_checks").get<int>();
  if (j.contains("monad")) {
    const auto& m = j.at("monad");
    r.monad = MonadRow{m.at("s").get<int>(), m.at("kernel_spectral").get<std::string>(),
                       m.at("cohomology_spectral").get<std::string>(), m.at("difference").get<std::string>()};
  }
  if (j.contains("general_twist")) {
    const auto& g = j.at("general_twist");
    r.general_twist = TwistRow{g.at("twist").get<std::string>(), g.at("dim_g").get<int>(),
                               g.at("canonical_basis").get<bool>(), g.at("spectral_divisor").get<std::string>()};
  }
  return r;
}

std::string ints(const std::vector<int>& v) {
  std::vector<std::string> parts;
  for (int x : v) parts.push_back(std::to_string(x));
  return "[" + join(parts, " ") + "]";
}

}  // namespace

std::string report_json(const Report& r) { return to_json(r).dump(2); }

Report report_from_json(const std::string& text) {
  try {
    return from_json(ordered_json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed report: ") + e.what());
  }
}

std::string error_json(const std::string& kind, const std::string& message) {
  ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  return j.dump(2);
}

std::string report_text(const Report& r) {
  std::ostringstream os;
  auto row = [&](const std::string& k, const std::string& v) {
    os << k << std::string(k.size() < 16 ? 16 - k.size() : 1, ' ') << v << "\n";
  };
  row("curve", r.curve);
  row("marked point", r.mark);
  row("presentation", r.kind + ", rank " + std::to_string(r.rank));
  row("twist", r.twist + " (" + std::to_string(r.section_count) + " sections)");
  row("verdict", r.verdict + (r.reason != "None" ? " (" + r.reason + ")" : ""));
  if (r.semistable()) {
    row("spectral", r.spectral);
    if (r.spectral_points != r.spectral) row("over " + r.split_field, r.spectral_points);
    std::vector<std::string> parts;
    for (const auto& f : r.splitting) parts.push_back("O(" + f.point + " - p) x F_" + std::to_string(f.rank));
    row("splitting", parts.empty() ? "0" : join(parts, " + "));
    row("fully split", std::string(r.fully_split ? "yes" : "no") + " (relation test: " + (r.test_fully_split ? "yes" : "no") +
                           (r.test_failed_condition.empty() ? "" : ", fails (" + r.test_failed_condition + ")") + ")");
    for (const auto& p : r.places)
      row("  " + p.point, "mult " + std::to_string(p.multiplicity) + "  exponents " + ints(p.exponents) + "  delta " + ints(p.delta) +
                              "  d_t " + std::to_string(p.kernel_dimension));
    row("slope bound", "max vanishing " + std::to_string(r.max_vanishing) + ", max incidence " + std::to_string(r.max_incidence) +
                           " over " + std::to_string(r.incidence_checks) + " frame checks");
  }
  if (r.monad) {
    row("monad s", std::to_string(r.monad->s));
    row("ker g spectral", r.monad->kernel_spectral);
    row("V spectral", r.monad->cohomology_spectral);
    row("difference", r.monad->difference);
  }
  if (r.general_twist) {
    row("general twist", r.general_twist->twist);
    row("  dim G", std::to_string(r.general_twist->dim_g) + (r.general_twist->canonical_basis ? " (canonical basis)" : ""));
    row("  spectral", r.general_twist->spectral);
  }
  return os.str();
}

// ---------------------------------------------------------------- sweep

Slot parse_slot(const std::string& text) {
  auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ParseError(1, 1, "name=range");
  Slot s{text.substr(0, eq), {}};
  for (char ch : s.name)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') throw ParseError(1, 1, "slot name of letters, digits and '_'");
  std::string range = text.substr(eq + 1);
  if (auto dots = range.find(".."); dots != std::string::npos) {
    long lo, hi;
    try {
      lo = std::stol(range.substr(0, dots));
      hi = std::stol(range.substr(dots + 2));
    } catch (const std::exception&) {
      throw ParseError(1, static_cast<int>(eq) + 2, "integer range lo..hi");
    }
    if (hi < lo || hi - lo > 100000) throw ParseError(1, static_cast<int>(eq) + 2, "a range of at most 100001 values");
    for (long v = lo; v <= hi; ++v) s.values.push_back(std::to_string(v));
  } else {
    std::stringstream ss(range);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) s.values.push_back(item);
  }
  if (s.values.empty()) throw ParseError(1, static_cast<int>(eq) + 2, "at least one value");
  return s;
}

SweepResult cmd_sweep(const std::string& template_text, const std::vector<Slot>& slots, int threads) {
  SweepResult res;
  std::size_t total = 1;
  for (const auto& s : slots) {
    res.slots.push_back(s.name);
    total *= s.values.size();
  }
  res.rows.resize(total);
  for (std::size_t i = 0; i < total; ++i) {
    SweepRow& row = res.rows[i];
    row.index = static_cast<int>(i);
    std::size_t rem = i;
    row.values.resize(slots.size());
    for (std::size_t k = slots.size(); k-- > 0;) {
      row.values[k] = slots[k].values[rem % slots[k].values.size()];
      rem /= slots[k].values.size();
    }
  }
  auto run = [&](SweepRow& row) {
    std::string text = template_text;
    for (std::size_t k = 0; k < slots.size(); ++k) {
      const std::string key = "{" + slots[k].name + "}";
      for (std::size_t at = text.find(key); at != std::string::npos; at = text.find(key, at + row.values[k].size()))
        text.replace(at, key.size(), row.values[k]);
    }
    try {
      row.report = cmd_analyze(parse_job(text));
      row.status = row.report->verdict;
    } catch (const ParseError& e) {
      row.skipped = true;
      row.status = std::string("parse error: ") + e.what();
    } catch (const Error& e) {
      row.skipped = true;
      row.status = std::string("invalid: ") + e.what();
    }
  };
  int n = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  n = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(n), std::max<std::size_t>(total, 1)));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < n; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < total; i = next++) run(res.rows[i]);
    });
  for (auto& t : pool) t.join();

  std::map<std::string, int> verdicts, shapes;
  for (const auto& row : res.rows) {
    if (row.skipped) {
      ++res.skipped;
      continue;
    }
    ++verdicts[row.report->verdict];
    if (row.report->semistable()) ++shapes[splitting_shape(*row.report)];
  }
  res.verdicts.assign(verdicts.begin(), verdicts.end());
  res.shapes.assign(shapes.begin(), shapes.end());
  return res;
}

std::string sweep_json(const SweepResult& s) {
  ordered_json j;
  j["slots"] = s.slots;
  j["rows"] = ordered_json::array();
  for (const auto& row : s.rows) {
    ordered_json r;
    r["index"] = row.index;
    r["values"] = row.values;
    r["skipped"] = row.skipped;
    r["status"] = row.status;
    if (row.report) {
      r["splitting_type"] = splitting_shape(*row.report);
      r["report"] = to_json(*row.report);
    }
    j["rows"].push_back(r);
  }
  j["skipped"] = s.skipped;
  j["verdicts"] = ordered_json::object();
  for (const auto& [k, v] : s.verdicts) j["verdicts"][k] = v;
  j["splitting_types"] = ordered_json::object();
  for (const auto& [k, v] : s.shapes) j["splitting_types"][k] = v;
  return j.dump(2);
}

std::string sweep_text(const SweepResult& s) {
  std::ostringstream os;
  os << "row  " << join(s.slots, " ") << "  status  splitting\n";
  for (const auto& row : s.rows) {
    os << row.index << "  " << join(row.values, " ") << "  " << row.status;
    if (row.report) {
      os << "  " << splitting_shape(*row.report);
      if (row.report->semistable()) {
        std::vector<std::string> parts;
        for (const auto& f : row.report->splitting) parts.push_back(f.point + "^" + std::to_string(f.rank));
        os << "  " << join(parts, " ");
      }
    }
    os << "\n";
  }
  os << "skipped " << s.skipped << "\n";
  os << "verdicts:";
  for (const auto& [k, v] : s.verdicts) os << " " << k << "=" << v;
  os << "\nsplitting types:";
  for (const auto& [k, v] : s.shapes) os << " " << k << "=" << v;
  os << "\n";
  return os.str();
}

}  // namespace ebundle
