#include "logtauber/spec.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

namespace logtauber {

namespace {

std::string shortest(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

// Interior probe points (in log u) for the finite-sampling check of a segment.
std::vector<double> probe_points(const LogPoint& start, const LogPoint* next) {
  std::vector<double> out;
  if (next != nullptr) {
    const double width = log_distance(start, *next);
    for (double frac : {0.125, 0.375, 0.625, 0.875}) {
      out.push_back(start.value() + frac * width);
    }
  } else {
    const double scale = std::max(1.0, std::fabs(start.value()));
    for (double step : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      const double v = start.value() + step * scale;
      if (v < 700.0) out.push_back(v);
    }
  }
  return out;
}

}  // namespace

LogPoint LogPoint::of_u(double u) {
  if (!(u > 0.0) || !std::isfinite(u)) {
    throw DomainError(DomainErrorKind::outside_domain,
                      "abscissa must be positive and finite");
  }
  return {std::log(u), 0.0};
}

double LogPoint::u() const { return std::exp(value()); }

double log_distance(const LogPoint& a, const LogPoint& b) noexcept {
  return (b.base - a.base) + (b.offset - a.offset);
}

bool operator<(const LogPoint& a, const LogPoint& b) noexcept {
  return log_distance(a, b) > 0.0;
}

bool operator<=(const LogPoint& a, const LogPoint& b) noexcept {
  return log_distance(a, b) >= 0.0;
}

Piece Piece::of_expr(Expr e) {
  Piece p;
  p.text = e.to_string();
  p.value = [expr = std::move(e)](double u) { return expr.eval(u); };
  return p;
}

Piece Piece::of_constant(double c) {
  Piece p;
  p.value = [c](double) { return c; };
  p.text = shortest(c);
  p.constant = true;
  return p;
}

FuncSpec::FuncSpec(std::vector<Segment> segments, std::string name)
    : segments_(std::move(segments)), name_(std::move(name)) {
  if (segments_.empty()) {
    throw InvalidArgument("FuncSpec needs at least one segment");
  }
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (!segments_[i].body.value) {
      throw InvalidArgument("segment " + std::to_string(i) + " has no body");
    }
    if (i + 1 < segments_.size() &&
        !(segments_[i].start < segments_[i + 1].start)) {
      throw InvalidArgument("segment starts must be strictly increasing");
    }
  }
  if (segments_.front().start.value() < 0.0) {
    throw InvalidArgument("domain must start at u >= 1");
  }
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const LogPoint* next = i + 1 < segments_.size() ? &segments_[i + 1].start
                                                    : nullptr;
    for (double v : probe_points(segments_[i].start, next)) {
      const double y = segments_[i].body.value(std::exp(v));
      if (!std::isfinite(y)) {
        throw DomainError(DomainErrorKind::non_finite,
                          "segment " + std::to_string(i) +
                              " is not finite at u = " + shortest(std::exp(v)));
      }
    }
  }
}

FuncSpec FuncSpec::single(Piece body, double domain_start, std::string name) {
  std::vector<Segment> segs;
  segs.push_back({LogPoint::of_u(domain_start), std::move(body)});
  return FuncSpec(std::move(segs), std::move(name));
}

FuncSpec FuncSpec::of_expr(std::string_view text, double domain_start) {
  return single(Piece::of_expr(Expr::parse(text, Var::u)), domain_start);
}

FuncSpec FuncSpec::piecewise(
    const std::vector<std::pair<double, std::string>>& pieces) {
  std::vector<Segment> segs;
  segs.reserve(pieces.size());
  for (const auto& [start, text] : pieces) {
    segs.push_back({LogPoint::of_u(start),
                    Piece::of_expr(Expr::parse(text, Var::u))});
  }
  return FuncSpec(std::move(segs));
}

FuncSpec FuncSpec::with_imag(FuncSpec imag) const {
  if (imag.is_complex()) {
    throw InvalidArgument("imaginary channel must be real-valued");
  }
  if (log_distance(log_domain_start(), imag.log_domain_start()) != 0.0) {
    throw InvalidArgument("real and imaginary channels need the same domain");
  }
  FuncSpec out = *this;
  out.imag_ = std::make_shared<const FuncSpec>(std::move(imag));
  return out;
}

double FuncSpec::domain_start() const { return log_domain_start().u(); }

std::size_t FuncSpec::segment_index(const LogPoint& log_u) const {
  if (log_u < segments_.front().start) {
    throw DomainError(DomainErrorKind::outside_domain,
                      "abscissa below the domain start");
  }
  // Last segment whose start is <= log_u.
  const auto it = std::upper_bound(
      segments_.begin(), segments_.end(), log_u,
      [](const LogPoint& p, const Segment& s) { return p < s.start; });
  return static_cast<std::size_t>(it - segments_.begin()) - 1;
}

double FuncSpec::eval(double u) const {
  const LogPoint p = LogPoint::of_u(u);
  return segments_[segment_index(p)].body.value(u);
}

double FuncSpec::eval_log(const LogPoint& log_u) const {
  return segments_[segment_index(log_u)].body.value(log_u.u());
}

std::complex<double> FuncSpec::eval_complex(double u) const {
  return {eval(u), imag_ ? imag_->eval(u) : 0.0};
}

std::string FuncSpec::describe() const {
  std::string out;
  if (!name_.empty()) {
    out = name_;
  } else {
    out = "piecewise[";
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      if (i) out += ';';
      out += shortest(segments_[i].start.base);
      if (segments_[i].start.offset != 0.0) {
        out += '+' + shortest(segments_[i].start.offset);
      }
      out += ':' + segments_[i].body.text;
    }
    out += ']';
  }
  if (imag_) out += " + i*(" + imag_->describe() + ")";
  return out;
}

SeqSpec SeqSpec::of_expr(std::string_view text) {
  SeqSpec s;
  Expr e = Expr::parse(text, Var::k);
  s.name_ = e.to_string();
  s.source_ = std::make_shared<const Source>(std::move(e));
  return s;
}

SeqSpec SeqSpec::of_list(std::vector<double> values, std::string name) {
  SeqSpec s;
  if (name.empty()) name = "list[" + std::to_string(values.size()) + "]";
  s.name_ = std::move(name);
  s.source_ = std::make_shared<const Source>(std::move(values));
  return s;
}

SeqSpec SeqSpec::of_function(std::function<double(std::int64_t)> fn,
                             std::string name) {
  SeqSpec s;
  s.name_ = std::move(name);
  s.source_ = std::make_shared<const Source>(std::move(fn));
  return s;
}

SeqSpec SeqSpec::with_imag(SeqSpec imag) const {
  if (imag.is_complex()) {
    throw InvalidArgument("imaginary channel must be real-valued");
  }
  SeqSpec out = *this;
  out.imag_ = std::make_shared<const SeqSpec>(std::move(imag));
  return out;
}

double SeqSpec::term(std::int64_t k) const {
  if (!source_) throw InvalidArgument("empty SeqSpec");
  if (k < 1) {
    throw DomainError(DomainErrorKind::index_out_of_range,
                      "sequence index must be >= 1");
  }
  if (const auto* e = std::get_if<Expr>(source_.get())) {
    return e->eval(static_cast<double>(k));
  }
  if (const auto* list = std::get_if<std::vector<double>>(source_.get())) {
    if (static_cast<std::size_t>(k) > list->size()) {
      throw DomainError(DomainErrorKind::index_out_of_range,
                        "index " + std::to_string(k) +
                            " past the end of an explicit list of length " +
                            std::to_string(list->size()));
    }
    return (*list)[static_cast<std::size_t>(k - 1)];
  }
  return std::get<std::function<double(std::int64_t)>>(*source_)(k);
}

void SeqSpec::terms(std::int64_t first, std::size_t count, double* out) const {
  if (count == 0) return;
  if (const auto* e = std::get_if<Expr>(source_.get()); e && first >= 1) {
    std::array<double, Expr::kBlock> x;
    for (std::size_t done = 0; done < count; done += x.size()) {
      const std::size_t m = std::min(x.size(), count - done);
      for (std::size_t i = 0; i < m; ++i) {
        x[i] = static_cast<double>(first + static_cast<std::int64_t>(done + i));
      }
      e->eval_block(x.data(), out + done, m);
    }
    return;
  }
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = term(first + static_cast<std::int64_t>(i));
  }
}

TermStream::TermStream(const SeqSpec& s, std::int64_t first, std::int64_t last)
    : s_(&s), k_(first), last_(last) {}

std::complex<double> TermStream::next() {
  if (pos_ == size_) refill();
  const std::size_t i = pos_++;
  return {re_[i], s_->is_complex() ? im_[i] : 0.0};
}

void TermStream::refill() {
  // Never evaluate past `last`: later indices may be outside the domain.
  const std::int64_t left = std::max<std::int64_t>(last_ - k_ + 1, 1);
  const std::size_t m = std::min(re_.size(), static_cast<std::size_t>(left));
  s_->terms(k_, m, re_.data());
  if (s_->is_complex()) s_->imag().terms(k_, m, im_.data());
  k_ += static_cast<std::int64_t>(m);
  pos_ = 0;
  size_ = m;
}

std::complex<double> SeqSpec::term_complex(std::int64_t k) const {
  return {term(k), imag_ ? imag_->term(k) : 0.0};
}

std::string SeqSpec::describe() const {
  std::string out = "seq:" + name_;
  if (imag_) out += " + i*(" + imag_->describe() + ")";
  return out;
}

std::string describe(const Spec& spec) {
  return std::visit([](const auto& s) { return s.describe(); }, spec);
}

std::uint64_t fingerprint(std::string_view text) noexcept {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace logtauber
