#include "rtd/cnf.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <sstream>

#include "rtd/error.hpp"
#include "rtd/random.hpp"

namespace rtd {

Assignment Assignment::random(std::size_t num_vars, Rng& rng) {
  Assignment a(num_vars);
  for (Var v = 1; v <= num_vars; ++v) a.set(v, rng.coin());
  return a;
}

Formula::Formula(std::uint32_t num_vars, std::vector<Clause> clauses)
    : num_vars_(num_vars), clauses_(std::move(clauses)) {
  if (num_vars_ == 0) throw ContractViolation("formula must have at least one variable");
  std::vector<std::uint32_t> counts(num_vars_ + 1, 0);
  std::vector<Var> seen;
  for (std::size_t c = 0; c < clauses_.size(); ++c) {
    const Clause& clause = clauses_[c];
    if (clause.empty()) throw ContractViolation("empty clause " + std::to_string(c));
    seen.clear();
    for (Lit lit : clause) {
      if (lit.dimacs() == 0 || lit.var() > num_vars_) {
        throw ContractViolation("literal out of range in clause " + std::to_string(c));
      }
      if (std::find(seen.begin(), seen.end(), lit.var()) == seen.end()) {
        seen.push_back(lit.var());
        ++counts[lit.var()];
      }
    }
  }
  occ_offset_.assign(num_vars_ + 1, 0);
  for (Var v = 1; v <= num_vars_; ++v) occ_offset_[v] = occ_offset_[v - 1] + counts[v];
  occ_index_.resize(occ_offset_[num_vars_]);
  std::vector<std::uint32_t> fill(occ_offset_.begin(), occ_offset_.end() - 1);
  for (std::size_t c = 0; c < clauses_.size(); ++c) {
    seen.clear();
    for (Lit lit : clauses_[c]) {
      if (std::find(seen.begin(), seen.end(), lit.var()) != seen.end()) continue;
      seen.push_back(lit.var());
      occ_index_[fill[lit.var() - 1]++] = static_cast<std::uint32_t>(c);
    }
  }
}

std::string_view to_string(CompletenessClass c) {
  switch (c) {
    case CompletenessClass::Complete: return "complete";
    case CompletenessClass::ApproximatelyComplete: return "approximately_complete";
    case CompletenessClass::EssentiallyIncomplete: return "essentially_incomplete";
  }
  return "unknown";
}

bool clause_satisfied(const Clause& clause, const Assignment& a) {
  return std::any_of(clause.begin(), clause.end(), [&](Lit lit) { return a.satisfies(lit); });
}

std::size_t count_unsat(const Formula& formula, const Assignment& a) {
  require(a.size() == formula.num_vars(), "assignment length does not match formula");
  std::size_t unsat = 0;
  for (const Clause& clause : formula.clauses()) {
    if (!clause_satisfied(clause, a)) ++unsat;
  }
  return unsat;
}

int flip_delta(const Formula& formula, const Assignment& a, Var v) {
  require(a.size() == formula.num_vars(), "assignment length does not match formula");
  require(v >= 1 && v <= formula.num_vars(), "variable out of range");
  int delta = 0;
  for (std::uint32_t c : formula.occurrences(v)) {
    bool before = false;
    bool after = false;
    for (Lit lit : formula.clause(c)) {
      const bool value = a.satisfies(lit);
      before |= value;
      after |= (lit.var() == v) ? !value : value;
    }
    delta += static_cast<int>(before) - static_cast<int>(after);
  }
  return delta;
}

namespace {

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch) != 0; });
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

template <typename T>
bool parse_int(std::string_view token, T& out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

}  // namespace

Formula parse_dimacs(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  long long declared_vars = 0;
  long long declared_clauses = 0;
  std::vector<Clause> clauses;
  Clause current;
  std::size_t current_line = 0;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (is_blank(view)) continue;
    const auto first = view.find_first_not_of(" \t");
    if (view[first] == 'c') continue;
    if (view[first] == '%') break;  // SATLIB end marker
    if (view[first] == 'p') {
      if (have_header) throw ParseError("duplicate header", line_no);
      const auto tokens = split_ws(view);
      if (tokens.size() != 4 || tokens[0] != "p" || tokens[1] != "cnf" ||
          !parse_int(tokens[2], declared_vars) || !parse_int(tokens[3], declared_clauses) ||
          declared_vars < 1 || declared_clauses < 0 || declared_vars > 0x7fffffff) {
        throw ParseError("malformed header, expected 'p cnf <vars> <clauses>'", line_no);
      }
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError("clause data before 'p cnf' header", line_no);
    for (std::string_view token : split_ws(view)) {
      long long value = 0;
      if (!parse_int(token, value)) throw ParseError("invalid literal '" + std::string(token) + "'", line_no);
      if (value == 0) {
        if (current.empty()) throw ParseError("empty clause", line_no);
        clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      if (value > declared_vars || value < -declared_vars) {
        throw ParseError("literal out of range: " + std::string(token), line_no);
      }
      if (current.empty()) current_line = line_no;
      current.emplace_back(static_cast<int>(value));
    }
  }
  if (!have_header) throw ParseError("missing 'p cnf' header", line_no);
  if (!current.empty()) throw ParseError("last clause is not terminated by 0", current_line);
  if (static_cast<long long>(clauses.size()) != declared_clauses) {
    throw ParseError("clause count mismatch: header declares " + std::to_string(declared_clauses) +
                         ", found " + std::to_string(clauses.size()),
                     line_no);
  }
  return Formula(static_cast<std::uint32_t>(declared_vars), std::move(clauses));
}

Formula parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in);
}

void write_dimacs(std::ostream& out, const Formula& formula) {
  out << "p cnf " << formula.num_vars() << ' ' << formula.num_clauses() << '\n';
  for (const Clause& clause : formula.clauses()) {
    for (Lit lit : clause) out << lit.dimacs() << ' ';
    out << "0\n";
  }
}

std::string to_dimacs(const Formula& formula) {
  std::ostringstream out;
  write_dimacs(out, formula);
  return out.str();
}

}  // namespace rtd
