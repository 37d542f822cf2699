#include <cctype>
#include <sstream>

#include "gubs/traces.hpp"

namespace gubs::traces {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::string fail_at(int line, const std::string& msg) { return "line " + std::to_string(line) + ": " + msg; }

StateSet parse_states(const std::string& text, int line) {
  std::string body = trim(text);
  if (body == "{}" || body.empty()) return {};
  if (body.front() == '{' && body.back() == '}') body = trim(body.substr(1, body.size() - 2));
  if (body.empty()) return {};
  std::string joined;
  for (const auto& part : split(body, ',')) {
    if (part.empty()) throw TraceError(fail_at(line, "empty state in list"));
    if (!joined.empty()) joined += " + ";
    joined += part;
  }
  Program p;
  try {
    p = parse_program("{ step :: " + joined + " }");
  } catch (const SyntaxError& e) {
    throw TraceError(fail_at(line, "bad state list '" + body + "' near '" + e.found() + "'"));
  }
  const auto& obs = std::get<ObservationB>(p.behaviours.at(0).node);
  return StateSet(obs.states.states.begin(), obs.states.states.end());
}

std::string join_states(const StateSet& s) {
  std::string out;
  for (const auto& st : s) {
    if (!out.empty()) out += ", ";
    out += render_state(st);
  }
  return out;
}

std::string join_idents(const std::set<Ident>& s) {
  std::string out;
  for (const auto& c : s) {
    if (!out.empty()) out += ", ";
    out += c.text;
  }
  return out;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

Trace parse_trace(std::string_view text) {
  Trace t;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::string line = trim(raw);
    if (line.empty()) continue;
    if (line[0] != '@') throw TraceError(fail_at(lineno, "expected '@<step>:'"));
    auto colon = line.find(':');
    if (colon == std::string::npos) throw TraceError(fail_at(lineno, "missing ':' after step index"));
    int index = 0;
    try {
      std::size_t used = 0;
      index = std::stoi(line.substr(1, colon - 1), &used);
      if (used != trim(line.substr(1, colon - 1)).size()) throw std::invalid_argument("junk");
    } catch (const std::exception&) {
      throw TraceError(fail_at(lineno, "bad step index"));
    }
    if (t.steps.empty()) {
      t.first = index;
    } else if (index != t.last() + 1) {
      throw TraceError(fail_at(lineno, "step " + std::to_string(index) + " does not follow step " +
                                           std::to_string(t.last())));
    }
    std::string rest = line.substr(colon + 1);
    std::set<Ident> ctx;
    if (auto bar = rest.find('|'); bar != std::string::npos) {
      std::string tail = trim(rest.substr(bar + 1));
      rest.erase(bar);
      const std::string key = "contexts:";
      if (tail.rfind(key, 0) != 0) throw TraceError(fail_at(lineno, "expected 'contexts:' after '|'"));
      for (const auto& c : split(tail.substr(key.size()), ',')) {
        if (c.empty()) continue;
        Ident id(c);
        if (!id.is_constant() || c.find_first_of(" \t+()") != std::string::npos)
          throw TraceError(fail_at(lineno, "bad context name '" + c + "'"));
        ctx.insert(id);
      }
    }
    t.steps.push_back(parse_states(rest, lineno));
    t.contexts.push_back(std::move(ctx));
  }
  validate(t);
  return t;
}

std::string render_trace(const Trace& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    os << "@" << t.first + static_cast<int>(i) << ":";
    if (!t.steps[i].empty()) os << " " << join_states(t.steps[i]);
    if (!t.contexts[i].empty()) os << " | contexts: " << join_idents(t.contexts[i]);
    os << "\n";
  }
  return os.str();
}

std::string render_history(const History& h) {
  std::string out = "(";
  for (std::size_t i = 0; i < h.periods.size(); ++i) {
    if (i) out += ", ";
    out += "{" + join_states(h.periods[i]) + "}";
  }
  return out + ")";
}

std::string timeline_svg(const Trace& t, const ChronologicalDivision& d) {
  const History h = extract_history(t, d);
  const int cell = 70, left = 30, row = 40, gap = 20;
  const int width = left + cell * static_cast<int>(t.steps.size()) + 10;
  const int height = 2 * row + gap + 40;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<text x=\"8\" y=\"" << row / 2 + 14 << "\">T</text>\n";
  os << "<text x=\"8\" y=\"" << row + gap + row / 2 + 14 << "\">H</text>\n";
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const int x = left + cell * static_cast<int>(i);
    os << "<rect x=\"" << x << "\" y=\"10\" width=\"" << cell << "\" height=\"" << row
       << "\" fill=\"#eef\" stroke=\"#446\"/>\n";
    std::string label = t.steps[i].empty() ? "{}" : join_states(t.steps[i]);
    os << "<text x=\"" << x + 4 << "\" y=\"" << 10 + row / 2 + 4 << "\">" << xml_escape(label) << "</text>\n";
    if (!t.contexts[i].empty()) {
      os << "<text x=\"" << x + 4 << "\" y=\"" << 10 + row - 4 << "\" fill=\"#a60\">["
         << xml_escape(join_idents(t.contexts[i])) << "]</text>\n";
    }
    os << "<text x=\"" << x + 2 << "\" y=\"" << height - 6 << "\" fill=\"#666\">" << t.first + static_cast<int>(i)
       << "</text>\n";
  }
  const int y = 10 + row + gap;
  for (std::size_t i = 0; i < h.periods.size(); ++i) {
    const int x = left + cell * (d.dates[i] - t.first);
    const int w = cell * (d.dates[i + 1] - d.dates[i]);
    os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << w << "\" height=\"" << row
       << "\" fill=\"#efe\" stroke=\"#464\"/>\n";
    std::string label = h.periods[i].empty() ? "{}" : "{" + join_states(h.periods[i]) + "}";
    os << "<text x=\"" << x + 4 << "\" y=\"" << y + row / 2 + 4 << "\">" << xml_escape(label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace gubs::traces
