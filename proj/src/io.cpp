#include "hs/io.hpp"

#include "hs/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace hs::io {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view field, const std::string& context) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    parse_fail(context + ": cannot parse '" + std::string(field) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  for (;;) {
    const auto pos = line.find(sep);
    out.push_back(line.substr(0, pos));
    if (pos == std::string_view::npos) break;
    line.remove_prefix(pos + 1);
  }
  return out;
}

StateVector state_from_triples(const json& arr) {
  if (!arr.is_array() || arr.empty()) parse_fail("state: expected a non-empty list of [k, re, im]");
  std::vector<std::pair<long, Complex>> entries;
  for (const auto& t : arr) {
    if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() || !t[1].is_number() ||
        !t[2].is_number()) {
      parse_fail("state: each entry must be [k, re, im] with integer k");
    }
    entries.emplace_back(t[0].get<long>(), Complex(t[1].get<double>(), t[2].get<double>()));
  }
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].first == entries[i - 1].first) {
      parse_fail("state: index " + std::to_string(entries[i].first) + " listed twice");
    }
  }
  return StateVector::from_entries(entries);
}

StateVector state_from_csv(std::string_view text) {
  std::vector<std::pair<long, Complex>> entries;
  bool header = true;
  long line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (header) {
      header = false;
      if (line != "k,re,im") parse_fail("state csv: expected header k,re,im");
      continue;
    }
    const auto fields = split(line, ',');
    const std::string ctx = "state csv line " + std::to_string(line_no);
    if (fields.size() != 3) parse_fail(ctx + ": expected 3 fields");
    entries.emplace_back(parse_number<long>(fields[0], ctx),
                         Complex(parse_number<double>(fields[1], ctx), parse_number<double>(fields[2], ctx)));
  }
  if (entries.empty()) parse_fail("state csv: no entries");
  json arr = json::array();
  for (const auto& [k, v] : entries) arr.push_back({k, v.real(), v.imag()});
  return state_from_triples(arr);
}

json complex_pair(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    parse_fail("expected [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json matrix2_to_json(const Matrix2& m) {
  return json::array({complex_pair(m(0, 0)), complex_pair(m(0, 1)), complex_pair(m(1, 0)), complex_pair(m(1, 1))});
}

Matrix2 matrix2_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) parse_fail("2x2 matrix: expected 4 [re, im] entries");
  Matrix2 m;
  m << complex_from(j[0]), complex_from(j[1]), complex_from(j[2]), complex_from(j[3]);
  return m;
}

IndexWindow window_from(const json& j) {
  if (!j.is_array() || j.size() != 2) parse_fail("window: expected [lo, hi]");
  return IndexWindow(j[0].get<long>(), j[1].get<long>());
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_fail("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::BadParams, "cannot write '" + path.string() + "'");
  out << text;
}

StateVector parse_state(std::string_view text) {
  const std::string_view body = trim(text);
  if (body.empty()) parse_fail("state: empty input");
  if (body.front() == '[' || body.front() == '{') {
    json j;
    try {
      j = json::parse(body);
    } catch (const json::exception& e) {
      parse_fail(std::string("state: ") + e.what());
    }
    if (j.is_object()) {
      if (!j.contains("coeffs")) parse_fail("state: object needs a 'coeffs' field");
      return state_from_triples(j["coeffs"]);
    }
    return state_from_triples(j);
  }
  return state_from_csv(body);
}

StateVector read_state(const std::filesystem::path& path) { return parse_state(read_text(path)); }

json state_to_json(const StateVector& s) {
  json arr = json::array();
  for (long k = s.window().lo(); k <= s.window().hi(); ++k) {
    const Complex z = s.at(k);
    arr.push_back({k, z.real(), z.imag()});
  }
  return json{{"coeffs", arr}};
}

std::string state_to_csv(const StateVector& s) {
  std::string out = "k,re,im\n";
  for (long k = s.window().lo(); k <= s.window().hi(); ++k) {
    const Complex z = s.at(k);
    out += std::to_string(k) + "," + format_double(z.real()) + "," + format_double(z.imag()) + "\n";
  }
  return out;
}

std::string plan_to_jsonl(const Plan& plan) {
  std::string out;
  for (const auto& op : plan.ops) {
    json rec;
    if (op.is_shift()) {
      rec = {{"op", "shift"}, {"dir", op.direction()}};
    } else {
      rec = {{"op", "u2"}, {"matrix", matrix2_to_json(op.matrix())}};
    }
    out += rec.dump() + "\n";
  }
  return out;
}

Plan plan_from_jsonl(std::string_view text) {
  Plan plan;
  long line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    const std::string ctx = "plan line " + std::to_string(line_no);
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      parse_fail(ctx + ": " + e.what());
    }
    const std::string kind = rec.value("op", "");
    if (kind == "shift") {
      const int dir = rec.value("dir", 0);
      if (dir != 1 && dir != -1) parse_fail(ctx + ": dir must be +1 or -1");
      plan.ops.push_back(PrimitiveOp::shift(dir));
    } else if (kind == "u2") {
      if (!rec.contains("matrix")) parse_fail(ctx + ": u2 record needs 'matrix'");
      plan.ops.push_back(PrimitiveOp::two_level(matrix2_from_json(rec["matrix"])));
    } else {
      parse_fail(ctx + ": unknown op '" + kind + "'");
    }
  }
  return plan;
}

Plan with_excursion(const Plan& plan, const StateVector& s0) {
  const IndexWindow base = s0.support(0.0).value_or(s0.window());
  const long reach = plan.L() + 1;
  const IndexWindow work = base.hull(IndexWindow(0, 1)).padded(reach);
  Plan out = plan;
  out.excursion = base.hull(IndexWindow(0, 1));
  for (const auto& s : plan_trajectory(embed(s0, work), plan)) {
    if (const auto sup = s.support(kSupportTol)) out.excursion = out.excursion.hull(*sup);
  }
  return out;
}

json budget_to_json(const ErrorBudget& b) {
  return json{{"delta", b.delta},     {"delta_tail", b.delta_tail},   {"eps_shift", b.eps_shift},
              {"eps_trotter", b.eps_trotter}, {"eps_u2", b.eps_u2}, {"L", b.L},
              {"N", b.N},             {"p", b.p},                     {"dt", b.dt},
              {"feasible", b.feasible}, {"violation", b.violation}, {"lhs", b.lhs()}};
}

ErrorBudget budget_from_json(const json& j) {
  ErrorBudget b;
  try {
    b.delta = j.at("delta").get<double>();
    b.delta_tail = j.at("delta_tail").get<double>();
    b.eps_shift = j.at("eps_shift").get<double>();
    b.eps_trotter = j.at("eps_trotter").get<double>();
    b.eps_u2 = j.at("eps_u2").get<double>();
    b.L = j.at("L").get<int>();
    b.N = j.at("N").get<int>();
    b.p = j.at("p").get<int>();
    b.dt = j.at("dt").get<double>();
    b.feasible = j.value("feasible", true);
    b.violation = j.value("violation", "");
  } catch (const json::exception& e) {
    parse_fail(std::string("ledger: ") + e.what());
  }
  return b;
}

json schedule_to_json(const ControlSchedule& sched) {
  json ops = json::array();
  std::vector<const ControlOperator*> seen;
  for (const auto& seg : sched.segments) {
    if (std::find(seen.begin(), seen.end(), seg.op.get()) != seen.end()) continue;
    seen.push_back(seg.op.get());
    const auto& op = *seg.op;
    json rec{{"id", op.id}};
    switch (op.kind) {
      case ControlOperator::Kind::Bp:
        rec["kind"] = "bp";
        rec["p"] = op.band;
        break;
      case ControlOperator::Kind::Block01:
        rec["kind"] = "block01";
        rec["generator"] = matrix2_to_json(op.block);
        break;
      case ControlOperator::Kind::Dense: {
        rec["kind"] = "dense";
        json entries = json::array();
        for (long c = 0; c < op.matrix.cols(); ++c) {
          for (long r = 0; r < op.matrix.rows(); ++r) {
            if (op.matrix(r, c) != Complex(0.0, 0.0)) {
              entries.push_back({r + sched.window.lo(), c + sched.window.lo(), op.matrix(r, c).real(),
                                 op.matrix(r, c).imag()});
            }
          }
        }
        rec["entries"] = entries;
        break;
      }
    }
    ops.push_back(rec);
  }

  json segs = json::array();
  for (std::size_t i = 0; i < sched.segments.size(); ++i) {
    const auto& seg = sched.segments[i];
    segs.push_back({{"index", i},
                    {"duration", seg.duration},
                    {"amplitude", seg.amplitude},
                    {"operator_id", seg.operator_id()},
                    {"h0_kind", std::string(seg.h0.name())}});
  }

  json out{{"window", {sched.window.lo(), sched.window.hi()}},
           {"convention", sched.convention == Convention::Physical ? "physical" : "target_form"},
           {"operators", ops},
           {"segments", segs}};
  if (sched.ledger) out["ledger"] = budget_to_json(*sched.ledger);
  return out;
}

ControlSchedule schedule_from_json(const json& j) {
  try {
    ControlSchedule sched(window_from(j.at("window")));
    const std::string conv = j.value("convention", "target_form");
    if (conv == "physical") {
      sched.convention = Convention::Physical;
    } else if (conv != "target_form") {
      parse_fail("schedule: unknown convention '" + conv + "'");
    }

    std::vector<std::shared_ptr<const ControlOperator>> ops;
    for (const auto& rec : j.at("operators")) {
      const std::string id = rec.at("id").get<std::string>();
      const std::string kind = rec.at("kind").get<std::string>();
      std::shared_ptr<const ControlOperator> op;
      if (kind == "bp") {
        op = ControlOperator::bp(rec.at("p").get<int>(), sched.window);
        auto renamed = std::make_shared<ControlOperator>(*op);
        renamed->id = id;
        op = renamed;
      } else if (kind == "block01") {
        op = ControlOperator::block01(id, matrix2_from_json(rec.at("generator")), sched.window);
      } else if (kind == "dense") {
        const auto& w = sched.window;
        Matrix h = Matrix::Zero(w.size(), w.size());
        for (const auto& e : rec.at("entries")) {
          const long r = e.at(0).get<long>();
          const long c = e.at(1).get<long>();
          if (!w.contains(r) || !w.contains(c)) parse_fail("schedule: dense entry outside window");
          h(w.offset(r), w.offset(c)) = Complex(e.at(2).get<double>(), e.at(3).get<double>());
        }
        op = ControlOperator::dense(id, std::move(h), w);
      } else {
        parse_fail("schedule: unknown operator kind '" + kind + "'");
      }
      ops.push_back(std::move(op));
    }

    for (const auto& rec : j.at("segments")) {
      const std::string id = rec.at("operator_id").get<std::string>();
      const auto it = std::find_if(ops.begin(), ops.end(), [&](const auto& op) { return op->id == id; });
      if (it == ops.end()) parse_fail("schedule: segment refers to unknown operator '" + id + "'");
      sched.segments.push_back({rec.at("duration").get<double>(), rec.at("amplitude").get<double>(), *it,
                                HamiltonianSpec::parse(rec.value("h0_kind", "free_rotator"))});
    }
    if (j.contains("ledger")) sched.ledger = budget_from_json(j["ledger"]);
    return sched;
  } catch (const json::exception& e) {
    parse_fail(std::string("schedule: ") + e.what());
  }
}

std::string ledger_csv(const ErrorBudget& b) {
  std::string out = "line,value\n";
  auto row = [&](const std::string& name, const std::string& value) { out += name + "," + value + "\n"; };
  row("delta", format_double(b.delta));
  row("delta_tail", format_double(b.delta_tail));
  row("eps_shift", format_double(b.eps_shift));
  row("eps_trotter", format_double(b.eps_trotter));
  row("eps_u2", format_double(b.eps_u2));
  row("L", std::to_string(b.L));
  row("N", std::to_string(b.N));
  row("p", std::to_string(b.p));
  row("dt", format_double(b.dt));
  row("lhs", format_double(b.lhs()));
  row("holds", b.holds() ? "1" : "0");
  row("feasible", b.feasible ? "1" : "0");
  return out;
}

std::string trajectory_csv(const std::vector<StateVector>& states) {
  std::string out = "step,k,re,im\n";
  for (std::size_t step = 0; step < states.size(); ++step) {
    const auto& s = states[step];
    for (long k = s.window().lo(); k <= s.window().hi(); ++k) {
      const Complex z = s.at(k);
      if (z == Complex(0.0, 0.0)) continue;
      out += std::to_string(step) + "," + std::to_string(k) + "," + format_double(z.real()) + "," +
             format_double(z.imag()) + "\n";
    }
  }
  return out;
}

std::string matrix_csv(const Matrix& m, const IndexWindow& w) {
  if (m.rows() != w.size() || m.cols() != w.size()) {
    throw Error(ErrorCode::WindowMismatch, "matrix shape does not match window");
  }
  std::string out = "j,k,re,im\n";
  for (long j = w.lo(); j <= w.hi(); ++j) {
    for (long k = w.lo(); k <= w.hi(); ++k) {
      const Complex z = m(w.offset(j), w.offset(k));
      if (z == Complex(0.0, 0.0)) continue;
      out += std::to_string(j) + "," + std::to_string(k) + "," + format_double(z.real()) + "," +
             format_double(z.imag()) + "\n";
    }
  }
  return out;
}

}  // namespace hs::io
