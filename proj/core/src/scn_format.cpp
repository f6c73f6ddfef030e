#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "ssti/csv.hpp"  // format_double
#include "ssti/scenario.hpp"

// Scenario files are nested-section plain text:
//
//   key = value            # top-level entry
//   [section.sub]          # section header
//   list = [1.0, 2.0]
//   pairs = [[2.0, -200.0]]
//
// Parsing is strict: unknown sections or keys, duplicate keys, type
// mismatches and missing required keys are all errors that carry
// origin:line:col so a misspelled entry is caught instead of silently
// falling back to a default.

namespace ssti {

namespace {

struct Value {
  enum class Kind { kNumber, kBool, kString, kNumberList, kPairList };
  Kind kind = Kind::kNumber;
  double num = 0.0;
  bool boolean = false;
  std::string str;
  std::vector<double> list;
  std::vector<std::pair<double, double>> pairs;
  int line = 0;
  int col = 0;
  mutable bool consumed = false;
};

struct Section {
  std::map<std::string, Value> entries;
  int line = 0;
  mutable bool consumed = false;
};

struct Doc {
  std::string origin;
  std::map<std::string, Section> sections;  // "" holds top-level keys

  [[noreturn]] void fail(int line, int col, const std::string& msg) const {
    throw std::runtime_error(origin + ":" + std::to_string(line) + ":" +
                             std::to_string(col) + ": " + msg);
  }
};

bool parse_number(const std::string& text, double& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

// Splits a bracketed list body on top-level commas.
std::vector<std::string> split_list(const std::string& body) {
  std::vector<std::string> items;
  int depth = 0;
  std::string cur;
  for (char c : body) {
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if (c == ',' && depth == 0) {
      items.push_back(cur);
      cur.clear();
      continue;
    }
    cur += c;
  }
  if (!cur.empty() || !items.empty()) items.push_back(cur);
  return items;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

Value parse_value(const Doc& doc, const std::string& raw, int line, int col) {
  Value v;
  v.line = line;
  v.col = col;
  const std::string text = trim(raw);
  if (text.empty()) doc.fail(line, col, "missing value");

  if (text == "true" || text == "false") {
    v.kind = Value::Kind::kBool;
    v.boolean = (text == "true");
    return v;
  }
  if (text.front() == '"') {
    if (text.size() < 2 || text.back() != '"')
      doc.fail(line, col, "unterminated string");
    v.kind = Value::Kind::kString;
    for (size_t i = 1; i + 1 < text.size(); ++i) {
      if (text[i] == '\\') {
        if (i + 2 >= text.size()) doc.fail(line, col, "dangling escape in string");
        ++i;
        if (text[i] != '"' && text[i] != '\\')
          doc.fail(line, col, "unsupported escape in string");
      }
      v.str += text[i];
    }
    return v;
  }
  if (text.front() == '[') {
    if (text.back() != ']') doc.fail(line, col, "unterminated list");
    const std::string body = trim(text.substr(1, text.size() - 2));
    if (body.empty()) {
      v.kind = Value::Kind::kNumberList;
      return v;
    }
    const auto items = split_list(body);
    if (trim(items.front()).front() == '[') {
      v.kind = Value::Kind::kPairList;
      for (const auto& item : items) {
        const std::string it = trim(item);
        if (it.size() < 2 || it.front() != '[' || it.back() != ']')
          doc.fail(line, col, "expected [time, value] pair");
        const auto parts = split_list(it.substr(1, it.size() - 2));
        if (parts.size() != 2) doc.fail(line, col, "pairs must hold exactly two numbers");
        double a = 0.0, b = 0.0;
        if (!parse_number(trim(parts[0]), a) || !parse_number(trim(parts[1]), b))
          doc.fail(line, col, "pair entries must be numbers");
        v.pairs.emplace_back(a, b);
      }
      return v;
    }
    v.kind = Value::Kind::kNumberList;
    for (const auto& item : items) {
      double d = 0.0;
      if (!parse_number(trim(item), d))
        doc.fail(line, col, "list entries must be numbers: '" + trim(item) + "'");
      v.list.push_back(d);
    }
    return v;
  }
  if (!parse_number(text, v.num))
    doc.fail(line, col, "expected number, boolean, string or list, found '" + text + "'");
  v.kind = Value::Kind::kNumber;
  return v;
}

Doc tokenize(const std::string& text, const std::string& origin) {
  Doc doc;
  doc.origin = origin;
  doc.sections[""].line = 0;

  std::istringstream in(text);
  std::string raw;
  std::string current;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    // Strip comments, respecting quoted strings.
    bool in_str = false;
    std::string line;
    for (size_t i = 0; i < raw.size(); ++i) {
      const char c = raw[i];
      if (c == '"' && (i == 0 || raw[i - 1] != '\\')) in_str = !in_str;
      if (c == '#' && !in_str) break;
      line += c;
    }
    const std::string t = trim(line);
    if (t.empty()) continue;

    if (t.front() == '[' && t.find('=') == std::string::npos) {
      if (t.back() != ']') doc.fail(line_no, 1, "malformed section header");
      const std::string name = trim(t.substr(1, t.size() - 2));
      if (name.empty()) doc.fail(line_no, 1, "empty section name");
      if (doc.sections.count(name)) doc.fail(line_no, 1, "duplicate section [" + name + "]");
      doc.sections[name].line = line_no;
      current = name;
      continue;
    }

    const size_t eq = line.find('=');
    if (eq == std::string::npos) doc.fail(line_no, 1, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) doc.fail(line_no, 1, "missing key before '='");
    auto& section = doc.sections[current];
    if (section.entries.count(key))
      doc.fail(line_no, 1, "duplicate key '" + key + "'");
    const size_t vstart = line.find_first_not_of(" \t", eq + 1);
    const int col = vstart == std::string::npos ? static_cast<int>(eq) + 2
                                                : static_cast<int>(vstart) + 1;
    section.entries[key] =
        parse_value(doc, line.substr(eq + 1), line_no, col);
  }
  return doc;
}

// Typed access with consumption tracking.
class Reader {
 public:
  Reader(const Doc& doc, const std::string& section) : doc_(doc), name_(section) {
    auto it = doc.sections.find(section);
    section_ = it == doc.sections.end() ? nullptr : &it->second;
    if (section_) section_->consumed = true;
  }

  bool present() const { return section_ != nullptr; }

  const Value* find(const std::string& key) const {
    if (!section_) return nullptr;
    auto it = section_->entries.find(key);
    if (it == section_->entries.end()) return nullptr;
    it->second.consumed = true;
    return &it->second;
  }

  [[noreturn]] void missing(const std::string& key) const {
    const int line = section_ ? section_->line : 0;
    doc_.fail(line, 1, "section " + label() + " is missing required key '" + key + "'");
  }

  double number(const std::string& key) const {
    const Value* v = find(key);
    if (!v) missing(key);
    if (v->kind != Value::Kind::kNumber) doc_.fail(v->line, v->col, "'" + key + "' must be a number");
    return v->num;
  }

  double number_or(const std::string& key, double fallback) const {
    const Value* v = find(key);
    if (!v) return fallback;
    if (v->kind != Value::Kind::kNumber) doc_.fail(v->line, v->col, "'" + key + "' must be a number");
    return v->num;
  }

  int integer(const std::string& key) const { return to_int(key, number(key)); }

  int integer_or(const std::string& key, int fallback) const {
    const Value* v = find(key);
    if (!v) return fallback;
    if (v->kind != Value::Kind::kNumber) doc_.fail(v->line, v->col, "'" + key + "' must be a number");
    return to_int(key, v->num);
  }

  bool boolean_or(const std::string& key, bool fallback) const {
    const Value* v = find(key);
    if (!v) return fallback;
    if (v->kind != Value::Kind::kBool) doc_.fail(v->line, v->col, "'" + key + "' must be true or false");
    return v->boolean;
  }

  std::string string_or(const std::string& key, const std::string& fallback) const {
    const Value* v = find(key);
    if (!v) return fallback;
    if (v->kind != Value::Kind::kString) doc_.fail(v->line, v->col, "'" + key + "' must be a quoted string");
    return v->str;
  }

  std::vector<double> number_list(const std::string& key) const {
    const Value* v = find(key);
    if (!v) missing(key);
    if (v->kind != Value::Kind::kNumberList)
      doc_.fail(v->line, v->col, "'" + key + "' must be a list of numbers");
    return v->list;
  }

  std::vector<std::pair<double, double>> pair_list_or(const std::string& key) const {
    const Value* v = find(key);
    if (!v) return {};
    if (v->kind == Value::Kind::kNumberList && v->list.empty()) return {};
    if (v->kind != Value::Kind::kPairList)
      doc_.fail(v->line, v->col, "'" + key + "' must be a list of [time, value] pairs");
    return v->pairs;
  }

  const Doc& doc() const { return doc_; }

 private:
  int to_int(const std::string& key, double v) const {
    if (v != std::floor(v) || std::abs(v) > 1e9) {
      const Value* val = find(key);
      doc_.fail(val->line, val->col, "'" + key + "' must be an integer");
    }
    return static_cast<int>(v);
  }

  std::string label() const { return name_.empty() ? "(top level)" : "[" + name_ + "]"; }

  const Doc& doc_;
  std::string name_;
  const Section* section_ = nullptr;
};

void reject_unconsumed(const Doc& doc) {
  for (const auto& [name, section] : doc.sections) {
    if (!section.consumed && !section.entries.empty())
      doc.fail(section.line, 1, "unknown section [" + name + "]");
    for (const auto& [key, value] : section.entries) {
      if (!value.consumed) {
        const std::string where = name.empty() ? "top level" : "section [" + name + "]";
        doc.fail(value.line, 1, "unknown key '" + key + "' in " + where);
      }
    }
  }
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  const Doc doc = tokenize(text, origin);
  Scenario s;

  {
    Reader top(doc, "");
    s.name = top.string_or("name", "");
    s.description = top.string_or("description", "");
    s.base_frequency_hz = top.number_or("base_frequency_hz", 50.0);
    s.system_base_mva = top.number_or("system_base_mva", 1000.0);
    s.lumped = top.boolean_or("lumped", false);
    const std::string centering = top.string_or("leadlag_centering", "as_printed");
    if (centering == "as_printed") {
      s.leadlag_centering = LeadLagCentering::kAsPrinted;
    } else if (centering == "geometric") {
      s.leadlag_centering = LeadLagCentering::kGeometric;
    } else {
      const Value* v = top.find("leadlag_centering");
      doc.fail(v ? v->line : 0, v ? v->col : 0,
               "leadlag_centering must be \"as_printed\" or \"geometric\"");
    }
  }

  {
    Reader sec(doc, "shaft");
    if (!sec.present())
      throw std::runtime_error(origin + ":0:0: missing required section [shaft]");
    s.shaft.inertia_kgm2 = sec.number_list("inertia_kgm2");
    s.shaft.stiffness_nm_per_rad = sec.number_list("stiffness_nm_per_rad");
    s.shaft.damping_nms_per_rad = sec.number_list("damping_nms_per_rad");
    s.shaft.generator_index = sec.integer("generator_index");
    s.shaft.base_power_mva = sec.number("base_power_mva");
    s.shaft.base_frequency_hz = s.base_frequency_hz;
  }

  {
    Reader sec(doc, "machine");
    if (sec.present()) {
      s.machine.rated_mva = sec.number("rated_mva");
      s.machine.rated_kv = sec.number("rated_kv");
      s.machine.xd = sec.number("xd");
      s.machine.xq = sec.number("xq");
      s.machine.xd_p = sec.number("xd_p");
      s.machine.xd_pp = sec.number("xd_pp");
      s.machine.xq_pp = sec.number("xq_pp");
      s.machine.td0_p = sec.number("td0_p");
      s.machine.td0_pp = sec.number("td0_pp");
      s.machine.tq0_pp = sec.number("tq0_pp");
      s.machine.ra = sec.number("ra");
      s.machine.terminal_b_pu = sec.number_or("terminal_b_pu", 0.0);
      s.machine.p_mw = sec.number("p_mw");
      s.machine.v_setpoint_pu = sec.number_or("v_setpoint_pu", 1.0);
    }
  }

  {
    Reader sec(doc, "transformer");
    if (sec.present()) {
      s.transformer.rated_mva = sec.number("rated_mva");
      s.transformer.r_pu = sec.number_or("r_pu", 0.0);
      s.transformer.x_pu = sec.number("x_pu");
    }
  }

  {
    Reader sec(doc, "grid");
    if (sec.present()) {
      s.grid.nominal_kv = sec.number("nominal_kv");
      s.grid.s_sc_mva = sec.number("s_sc_mva");
      s.grid.x_over_r = sec.number_or("x_over_r", 10.0);
      for (const auto& [t, dmva] : sec.pair_list_or("events"))
        s.grid.events.push_back({t, dmva});
    }
  }

  for (const auto& [section, params] :
       {std::pair<std::string, LineParams*>{"line.machine", &s.line_machine},
        std::pair<std::string, LineParams*>{"line.hvdc", &s.line_hvdc}}) {
    Reader sec(doc, section);
    if (sec.present()) {
      params->r_ohm_per_km = sec.number_or("r_ohm_per_km", 0.0);
      params->x_ohm_per_km = sec.number("x_ohm_per_km");
      params->b_us_per_km = sec.number_or("b_us_per_km", 0.0);
      params->length_km = sec.number("length_km");
    }
  }

  {
    Reader sec(doc, "hvdc");
    if (sec.present()) {
      s.hvdc.enabled = sec.boolean_or("enabled", true);
      s.hvdc.rated_mva = sec.number_or("rated_mva", 0.0);
      s.hvdc.p_setpoint_pu = sec.number_or("p_setpoint_pu", 0.0);
      s.hvdc.q_setpoint_pu = sec.number_or("q_setpoint_pu", 0.0);
      s.hvdc.pll_kp = sec.number_or("pll_kp", 0.0);
      s.hvdc.pll_ki = sec.number_or("pll_ki", 0.0);
      s.hvdc.current_loop_bw_rad = sec.number_or("current_loop_bw_rad", 0.0);
      s.hvdc.power_loop_kp = sec.number_or("power_loop_kp", 0.0);
      s.hvdc.power_loop_ki = sec.number_or("power_loop_ki", 0.0);
      s.hvdc.current_limit_pu = sec.number_or("current_limit_pu", 1.1);
      s.hvdc.blocking_voltage_pu = sec.number_or("blocking_voltage_pu", 0.2);
    } else {
      s.hvdc.enabled = false;
    }
  }

  {
    Reader sec(doc, "ssdc");
    if (sec.present()) {
      s.ssdc.enabled = sec.boolean_or("enabled", true);
      s.ssdc.center_frequency_hz = sec.number_or("center_frequency_hz", 0.0);
      s.ssdc.quality_factor = sec.number_or("quality_factor", 50.0);
      s.ssdc.t1_s = sec.number_or("t1_s", 0.0);
      s.ssdc.t2_s = sec.number_or("t2_s", 0.0);
      s.ssdc.gain = sec.number_or("gain", 0.0);
      s.ssdc.output_limit_pu = sec.number_or("output_limit_pu", 0.05);
    }
  }

  {
    Reader sec(doc, "filter");
    if (sec.present()) {
      s.filter.enabled = sec.boolean_or("enabled", true);
      s.filter.tuned_frequency_hz = sec.number_or("tuned_frequency_hz", 0.0);
      s.filter.quality_factor = sec.number_or("quality_factor", 100.0);
      s.filter.peak_impedance_pu = sec.number_or("peak_impedance_pu", 1.0);
    }
  }

  {
    Reader sec(doc, "standin");
    if (sec.present()) {
      s.standin.enabled = sec.boolean_or("enabled", true);
      s.standin.de = sec.number_or("de", 0.0);
      s.standin.ke = sec.number_or("ke", 0.0);
      s.standin.rational = sec.boolean_or("rational", false);
      s.standin.b0 = sec.number_or("b0", 0.0);
      s.standin.b1 = sec.number_or("b1", 0.0);
      s.standin.b2 = sec.number_or("b2", 0.0);
      s.standin.a0 = sec.number_or("a0", 1.0);
      s.standin.a1 = sec.number_or("a1", 0.0);
      s.standin.a2 = sec.number_or("a2", 0.0);
    }
  }

  {
    Reader sec(doc, "sim");
    if (sec.present()) {
      s.sim.dt_s = sec.number_or("dt_s", 20e-6);
      s.sim.duration_s = sec.number_or("duration_s", 10.0);
      s.sim.decimation = sec.integer_or("decimation", 10);
      s.sim.divergence_limit_pu = sec.number_or("divergence_limit_pu", 100.0);
    }
  }

  {
    Reader sec(doc, "scan");
    if (sec.present()) {
      s.scan.amplitude_pu = sec.number_or("amplitude_pu", 1e-3);
      s.scan.settle_periods = sec.integer_or("settle_periods", 10);
      s.scan.measure_periods = sec.integer_or("measure_periods", 20);
      const std::string variant = sec.string_or("variant", "restart");
      if (variant == "restart") {
        s.scan.variant = ScanVariant::kRestart;
      } else if (variant == "progressive") {
        s.scan.variant = ScanVariant::kProgressive;
      } else if (variant == "multitone") {
        s.scan.variant = ScanVariant::kMultitone;
      } else {
        const Value* v = sec.find("variant");
        doc.fail(v ? v->line : 0, v ? v->col : 0,
                 "scan.variant must be \"restart\", \"progressive\" or \"multitone\"");
      }
      s.scan.coarse_start_hz = sec.number_or("coarse_start_hz", 1.0);
      s.scan.coarse_stop_hz = sec.number_or("coarse_stop_hz", 59.0);
      s.scan.coarse_step_hz = sec.number_or("coarse_step_hz", 1.0);
      s.scan.refine_span_hz = sec.number_or("refine_span_hz", 1.0);
      s.scan.refine_step_hz = sec.number_or("refine_step_hz", 0.1);
      s.scan.max_tones = sec.integer_or("max_tones", 3);
    }
  }

  {
    Reader sec(doc, "protection");
    if (sec.present()) {
      s.protection.pickup_pu = sec.number_or("pickup_pu", 0.01);
      s.protection.reset_pu = sec.number_or("reset_pu", 0.005);
      s.protection.headroom = sec.number_or("headroom", 20.0);
      s.protection.response_damping_pu = sec.number_or("response_damping_pu", 0.1);
    }
  }

  reject_unconsumed(doc);

  if (s.standin.enabled) {
    s.shaft.validate();
    s.sim.validate();
    s.scan.validate(s.base_frequency_hz);
    s.standin.validate();
  } else {
    s.validate();
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("load_scenario: cannot open " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_scenario(buf.str(), path);
}

namespace {

std::string fmt(double v) { return format_double(v); }

std::string fmt_list(const std::vector<double>& values) {
  std::string out = "[";
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += fmt(values[i]);
  }
  return out + "]";
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream o;
  o << "name = " << quote(s.name) << "\n";
  if (!s.description.empty()) o << "description = " << quote(s.description) << "\n";
  o << "base_frequency_hz = " << fmt(s.base_frequency_hz) << "\n";
  o << "system_base_mva = " << fmt(s.system_base_mva) << "\n";
  o << "lumped = " << (s.lumped ? "true" : "false") << "\n";
  o << "leadlag_centering = "
    << (s.leadlag_centering == LeadLagCentering::kAsPrinted ? "\"as_printed\"" : "\"geometric\"")
    << "\n";

  o << "\n[shaft]\n";
  o << "inertia_kgm2 = " << fmt_list(s.shaft.inertia_kgm2) << "\n";
  o << "stiffness_nm_per_rad = " << fmt_list(s.shaft.stiffness_nm_per_rad) << "\n";
  o << "damping_nms_per_rad = " << fmt_list(s.shaft.damping_nms_per_rad) << "\n";
  o << "generator_index = " << s.shaft.generator_index << "\n";
  o << "base_power_mva = " << fmt(s.shaft.base_power_mva) << "\n";

  {
    o << "\n[machine]\n";
    o << "rated_mva = " << fmt(s.machine.rated_mva) << "\n";
    o << "rated_kv = " << fmt(s.machine.rated_kv) << "\n";
    o << "xd = " << fmt(s.machine.xd) << "\n";
    o << "xq = " << fmt(s.machine.xq) << "\n";
    o << "xd_p = " << fmt(s.machine.xd_p) << "\n";
    o << "xd_pp = " << fmt(s.machine.xd_pp) << "\n";
    o << "xq_pp = " << fmt(s.machine.xq_pp) << "\n";
    o << "td0_p = " << fmt(s.machine.td0_p) << "\n";
    o << "td0_pp = " << fmt(s.machine.td0_pp) << "\n";
    o << "tq0_pp = " << fmt(s.machine.tq0_pp) << "\n";
    o << "ra = " << fmt(s.machine.ra) << "\n";
    o << "terminal_b_pu = " << fmt(s.machine.terminal_b_pu) << "\n";
    o << "p_mw = " << fmt(s.machine.p_mw) << "\n";
    o << "v_setpoint_pu = " << fmt(s.machine.v_setpoint_pu) << "\n";

    o << "\n[transformer]\n";
    o << "rated_mva = " << fmt(s.transformer.rated_mva) << "\n";
    o << "r_pu = " << fmt(s.transformer.r_pu) << "\n";
    o << "x_pu = " << fmt(s.transformer.x_pu) << "\n";

    o << "\n[grid]\n";
    o << "nominal_kv = " << fmt(s.grid.nominal_kv) << "\n";
    o << "s_sc_mva = " << fmt(s.grid.s_sc_mva) << "\n";
    o << "x_over_r = " << fmt(s.grid.x_over_r) << "\n";
    o << "events = [";
    for (size_t i = 0; i < s.grid.events.size(); ++i) {
      if (i) o << ", ";
      o << "[" << fmt(s.grid.events[i].t_s) << ", " << fmt(s.grid.events[i].delta_mva) << "]";
    }
    o << "]\n";

    o << "\n[line.machine]\n";
    o << "r_ohm_per_km = " << fmt(s.line_machine.r_ohm_per_km) << "\n";
    o << "x_ohm_per_km = " << fmt(s.line_machine.x_ohm_per_km) << "\n";
    o << "b_us_per_km = " << fmt(s.line_machine.b_us_per_km) << "\n";
    o << "length_km = " << fmt(s.line_machine.length_km) << "\n";

    o << "\n[line.hvdc]\n";
    o << "r_ohm_per_km = " << fmt(s.line_hvdc.r_ohm_per_km) << "\n";
    o << "x_ohm_per_km = " << fmt(s.line_hvdc.x_ohm_per_km) << "\n";
    o << "b_us_per_km = " << fmt(s.line_hvdc.b_us_per_km) << "\n";
    o << "length_km = " << fmt(s.line_hvdc.length_km) << "\n";
  }

  {
    o << "\n[hvdc]\n";
    o << "enabled = " << (s.hvdc.enabled ? "true" : "false") << "\n";
    o << "rated_mva = " << fmt(s.hvdc.rated_mva) << "\n";
    o << "p_setpoint_pu = " << fmt(s.hvdc.p_setpoint_pu) << "\n";
    o << "q_setpoint_pu = " << fmt(s.hvdc.q_setpoint_pu) << "\n";
    o << "pll_kp = " << fmt(s.hvdc.pll_kp) << "\n";
    o << "pll_ki = " << fmt(s.hvdc.pll_ki) << "\n";
    o << "current_loop_bw_rad = " << fmt(s.hvdc.current_loop_bw_rad) << "\n";
    o << "power_loop_kp = " << fmt(s.hvdc.power_loop_kp) << "\n";
    o << "power_loop_ki = " << fmt(s.hvdc.power_loop_ki) << "\n";
    o << "current_limit_pu = " << fmt(s.hvdc.current_limit_pu) << "\n";
    o << "blocking_voltage_pu = " << fmt(s.hvdc.blocking_voltage_pu) << "\n";
  }

  {
    o << "\n[ssdc]\n";
    o << "enabled = " << (s.ssdc.enabled ? "true" : "false") << "\n";
    o << "center_frequency_hz = " << fmt(s.ssdc.center_frequency_hz) << "\n";
    o << "quality_factor = " << fmt(s.ssdc.quality_factor) << "\n";
    o << "t1_s = " << fmt(s.ssdc.t1_s) << "\n";
    o << "t2_s = " << fmt(s.ssdc.t2_s) << "\n";
    o << "gain = " << fmt(s.ssdc.gain) << "\n";
    o << "output_limit_pu = " << fmt(s.ssdc.output_limit_pu) << "\n";
  }

  {
    o << "\n[filter]\n";
    o << "enabled = " << (s.filter.enabled ? "true" : "false") << "\n";
    o << "tuned_frequency_hz = " << fmt(s.filter.tuned_frequency_hz) << "\n";
    o << "quality_factor = " << fmt(s.filter.quality_factor) << "\n";
    o << "peak_impedance_pu = " << fmt(s.filter.peak_impedance_pu) << "\n";
  }

  {
    o << "\n[standin]\n";
    o << "enabled = " << (s.standin.enabled ? "true" : "false") << "\n";
    o << "de = " << fmt(s.standin.de) << "\n";
    o << "ke = " << fmt(s.standin.ke) << "\n";
    o << "rational = " << (s.standin.rational ? "true" : "false") << "\n";
    o << "b0 = " << fmt(s.standin.b0) << "\n";
    o << "b1 = " << fmt(s.standin.b1) << "\n";
    o << "b2 = " << fmt(s.standin.b2) << "\n";
    o << "a0 = " << fmt(s.standin.a0) << "\n";
    o << "a1 = " << fmt(s.standin.a1) << "\n";
    o << "a2 = " << fmt(s.standin.a2) << "\n";
  }

  o << "\n[sim]\n";
  o << "dt_s = " << fmt(s.sim.dt_s) << "\n";
  o << "duration_s = " << fmt(s.sim.duration_s) << "\n";
  o << "decimation = " << s.sim.decimation << "\n";
  o << "divergence_limit_pu = " << fmt(s.sim.divergence_limit_pu) << "\n";

  o << "\n[scan]\n";
  o << "amplitude_pu = " << fmt(s.scan.amplitude_pu) << "\n";
  o << "settle_periods = " << s.scan.settle_periods << "\n";
  o << "measure_periods = " << s.scan.measure_periods << "\n";
  const char* variant = s.scan.variant == ScanVariant::kRestart       ? "restart"
                        : s.scan.variant == ScanVariant::kProgressive ? "progressive"
                                                                      : "multitone";
  o << "variant = \"" << variant << "\"\n";
  o << "coarse_start_hz = " << fmt(s.scan.coarse_start_hz) << "\n";
  o << "coarse_stop_hz = " << fmt(s.scan.coarse_stop_hz) << "\n";
  o << "coarse_step_hz = " << fmt(s.scan.coarse_step_hz) << "\n";
  o << "refine_span_hz = " << fmt(s.scan.refine_span_hz) << "\n";
  o << "refine_step_hz = " << fmt(s.scan.refine_step_hz) << "\n";
  o << "max_tones = " << s.scan.max_tones << "\n";

  o << "\n[protection]\n";
  o << "pickup_pu = " << fmt(s.protection.pickup_pu) << "\n";
  o << "reset_pu = " << fmt(s.protection.reset_pu) << "\n";
  o << "headroom = " << fmt(s.protection.headroom) << "\n";
  o << "response_damping_pu = " << fmt(s.protection.response_damping_pu) << "\n";

  return o.str();
}

void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("save_scenario: cannot open " + path);
  f << serialize_scenario(s);
  if (!f) throw std::runtime_error("save_scenario: write failed for " + path);
}

}  // namespace ssti
