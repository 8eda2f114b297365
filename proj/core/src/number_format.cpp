// Copyright 2026 The sheetvis Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "number_format.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

namespace sheetvis::internal {
namespace {

struct Token {
  bool literal;
  std::string text;  // literal text, or the single code character
};

std::vector<std::string> SplitSections(std::string_view code) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < code.size(); ++i) {
    char c = code[i];
    if (c == '"') quoted = !quoted;
    if (!quoted && c == '\\' && i + 1 < code.size()) {
      out.back() += code.substr(i, 2);
      ++i;
      continue;
    }
    if (!quoted && c == ';') {
      out.emplace_back();
      continue;
    }
    out.back().push_back(c);
  }
  return out;
}

// Splits a section into literal runs and code characters. Bracketed
// modifiers are dropped except currency symbols in "[$sym-locale]". Returns
// nullopt for constructs we do not render (elapsed time, conditions).
std::optional<std::vector<Token>> Tokenize(std::string_view s) {
  std::vector<Token> out;
  auto lit = [&out](std::string t) {
    if (!out.empty() && out.back().literal) {
      out.back().text += t;
    } else {
      out.push_back({true, std::move(t)});
    }
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '"') {
      auto end = s.find('"', i + 1);
      if (end == std::string_view::npos) return std::nullopt;
      lit(std::string(s.substr(i + 1, end - i - 1)));
      i = end;
    } else if (c == '\\' && i + 1 < s.size()) {
      lit(std::string(1, s[++i]));
    } else if (c == '_' && i + 1 < s.size()) {
      lit(" ");
      ++i;
    } else if (c == '*' && i + 1 < s.size()) {
      ++i;
    } else if (c == '[') {
      auto end = s.find(']', i);
      if (end == std::string_view::npos) return std::nullopt;
      std::string_view inner = s.substr(i + 1, end - i - 1);
      if (!inner.empty() && inner[0] == '$') {
        auto dash = inner.find('-');
        lit(std::string(inner.substr(1, dash == std::string_view::npos
                                            ? std::string_view::npos
                                            : dash - 1)));
      } else if (!inner.empty() &&
                 (inner[0] == 'h' || inner[0] == 'm' || inner[0] == 's' ||
                  inner[0] == 'H' || inner[0] == 'M' || inner[0] == 'S' ||
                  inner[0] == '<' || inner[0] == '>' || inner[0] == '=')) {
        return std::nullopt;
      }
      i = end;
    } else {
      out.push_back({false, std::string(1, c)});
    }
  }
  return out;
}

bool IsDateCode(const std::vector<Token>& toks) {
  for (const Token& t : toks) {
    if (t.literal) continue;
    char c = static_cast<char>(std::tolower(static_cast<unsigned char>(t.text[0])));
    if (c == 'y' || c == 'd' || c == 'h' || c == 's' || c == 'm') return true;
  }
  return false;
}

std::string GroupThousands(const std::string& digits) {
  std::string out;
  int n = static_cast<int>(digits.size());
  for (int i = 0; i < n; ++i) {
    out.push_back(digits[i]);
    int left = n - i - 1;
    if (left > 0 && left % 3 == 0) out.push_back(',');
  }
  return out;
}

std::optional<std::string> FormatNumeric(double value,
                                         const std::vector<Token>& toks,
                                         bool emit_sign) {
  std::string prefix, suffix;
  int int_zeros = 0, dec_zeros = 0, dec_hash = 0, exp_zeros = 0, percent = 0;
  bool in_number = false, done_number = false, after_point = false;
  bool grouping = false, scientific = false, exp_sign_always = false;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const Token& t = toks[i];
    char c = t.literal ? '\0' : t.text[0];
    bool placeholder = c == '0' || c == '#' || c == '?';
    if (!t.literal && !done_number &&
        (placeholder || (in_number && (c == '.' || c == ',')) ||
         (!in_number && c == '.'))) {
      in_number = true;
      if (c == '.') {
        after_point = true;
      } else if (c == ',') {
        if (!after_point) grouping = true;
      } else if (scientific) {
        ++exp_zeros;
      } else if (after_point) {
        (c == '0' ? dec_zeros : dec_hash)++;
        if (c == '0' && dec_hash > 0) return std::nullopt;
      } else if (c == '0') {
        ++int_zeros;
      }
      continue;
    }
    if (!t.literal && in_number && !done_number && !scientific &&
        (c == 'E' || c == 'e') && i + 1 < toks.size() && !toks[i + 1].literal &&
        (toks[i + 1].text[0] == '+' || toks[i + 1].text[0] == '-')) {
      scientific = true;
      exp_sign_always = toks[i + 1].text[0] == '+';
      ++i;
      continue;
    }
    if (in_number) done_number = true;
    std::string piece = t.text;
    if (!t.literal) {
      if (c == '%') {
        ++percent;
      } else if (std::isalpha(static_cast<unsigned char>(c)) ||
                 c == '@' || c == '?') {
        return std::nullopt;
      }
    }
    (in_number ? suffix : prefix) += piece;
  }
  if (!in_number) return std::nullopt;
  if (scientific && exp_zeros == 0) return std::nullopt;

  double v = std::fabs(value) * std::pow(100.0, percent);
  int decimals = dec_zeros + dec_hash;
  std::string body;
  char buf[512];
  if (scientific) {
    int exponent = v == 0 ? 0 : static_cast<int>(std::floor(std::log10(v)));
    double mantissa = v == 0 ? 0 : v / std::pow(10.0, exponent);
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, mantissa);
    if (std::string(buf).rfind("10", 0) == 0) {
      ++exponent;
      std::snprintf(buf, sizeof(buf), "%.*f", decimals, mantissa / 10.0);
    }
    body = buf;
    std::snprintf(buf, sizeof(buf), "%0*d", std::min(exp_zeros, 8),
                  std::abs(exponent));
    body += std::string("E") + (exponent < 0 ? "-" : (exp_sign_always ? "+" : "")) +
            buf;
  } else {
    if (v >= 1e300) return std::nullopt;
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    std::string fixed = buf;
    auto point = fixed.find('.');
    std::string int_part = fixed.substr(0, point);
    std::string frac = point == std::string::npos ? "" : fixed.substr(point + 1);
    while (static_cast<int>(frac.size()) > dec_zeros && !frac.empty() &&
           frac.back() == '0') {
      frac.pop_back();
    }
    if (int_part == "0" && int_zeros == 0) int_part.clear();
    while (static_cast<int>(int_part.size()) < int_zeros) {
      int_part.insert(int_part.begin(), '0');
    }
    if (grouping) int_part = GroupThousands(int_part);
    body = int_part;
    if (decimals > 0 && (!frac.empty() || after_point)) {
      if (!frac.empty() || dec_zeros > 0) body += "." + frac;
    }
  }
  bool negative = value < 0 && emit_sign;
  if (negative) {
    bool all_zero = std::all_of(body.begin(), body.end(), [](char ch) {
      return ch == '0' || ch == '.' || ch == ',';
    });
    if (!all_zero) body = "-" + body;
  }
  return prefix + body + suffix;
}

std::optional<std::string> FormatDate(double serial,
                                      const std::vector<Token>& toks) {
  using namespace std::chrono;
  if (serial < 0 || serial > 2958465.99999) return std::nullopt;
  long long whole = static_cast<long long>(std::floor(serial));
  double frac = serial - static_cast<double>(whole);
  long long secs = std::llround(frac * 86400.0);
  if (secs >= 86400) {
    secs -= 86400;
    ++whole;
  }
  // 1900 date system, including the phantom 1900-02-29 (serial 60).
  long long day_offset = whole >= 61 ? whole - 1 : whole;
  if (whole == 60) day_offset = 59;
  sys_days base = sys_days{year{1899} / December / 31};
  year_month_day ymd{base + days{day_offset}};
  weekday wd{base + days{day_offset}};
  int y = static_cast<int>(ymd.year());
  unsigned mo = static_cast<unsigned>(ymd.month());
  unsigned d = static_cast<unsigned>(ymd.day());
  if (whole == 60) {
    mo = 2;
    d = 29;
  }
  int hour = static_cast<int>(secs / 3600);
  int minute = static_cast<int>((secs / 60) % 60);
  int second = static_cast<int>(secs % 60);

  static const char* kMonths[] = {"January", "February", "March",
                                  "April",   "May",      "June",
                                  "July",    "August",   "September",
                                  "October", "November", "December"};
  static const char* kDays[] = {"Sunday",   "Monday", "Tuesday", "Wednesday",
                                "Thursday", "Friday", "Saturday"};

  // Group code characters into runs ("yyyy", "mm", "AM/PM").
  struct Run {
    char kind;  // y m d h s a(ampm) or 0 for literal
    int len;
    std::string text;
  };
  std::vector<Run> runs;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const Token& t = toks[i];
    if (t.literal) {
      runs.push_back({0, 0, t.text});
      continue;
    }
    char c = static_cast<char>(std::tolower(static_cast<unsigned char>(t.text[0])));
    if (c == 'a') {
      std::string ahead;
      for (std::size_t j = i; j < toks.size() && j < i + 5; ++j) {
        ahead += toks[j].text;
      }
      std::string upper = ahead;
      std::transform(upper.begin(), upper.end(), upper.begin(), ::toupper);
      if (upper.rfind("AM/PM", 0) == 0) {
        runs.push_back({'a', 5, ""});
        i += 4;
        continue;
      }
      if (upper.rfind("A/P", 0) == 0) {
        runs.push_back({'a', 3, ""});
        i += 2;
        continue;
      }
      return std::nullopt;
    }
    if (c == 'y' || c == 'm' || c == 'd' || c == 'h' || c == 's') {
      if (!runs.empty() && runs.back().kind == c) {
        ++runs.back().len;
      } else {
        runs.push_back({c, 1, ""});
      }
      continue;
    }
    if (c == '0' || c == '.') continue;  // fractional seconds: not rendered
    if (std::isalpha(static_cast<unsigned char>(c))) return std::nullopt;
    runs.push_back({0, 0, t.text});
  }
  bool twelve_hour =
      std::any_of(runs.begin(), runs.end(), [](const Run& r) { return r.kind == 'a'; });

  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const Run& r = runs[i];
    switch (r.kind) {
      case 0:
        out += r.text;
        break;
      case 'y':
        std::snprintf(buf, sizeof(buf), r.len <= 2 ? "%02d" : "%04d",
                      r.len <= 2 ? y % 100 : y);
        out += buf;
        break;
      case 'm': {
        bool minute_ctx = false;
        for (std::size_t j = i; j-- > 0;) {
          if (runs[j].kind == 0) continue;
          minute_ctx = runs[j].kind == 'h';
          break;
        }
        for (std::size_t j = i + 1; !minute_ctx && j < runs.size(); ++j) {
          if (runs[j].kind == 0) continue;
          minute_ctx = runs[j].kind == 's';
          break;
        }
        if (minute_ctx && r.len <= 2) {
          std::snprintf(buf, sizeof(buf), r.len == 2 ? "%02d" : "%d", minute);
          out += buf;
        } else if (r.len == 1 || r.len == 2) {
          std::snprintf(buf, sizeof(buf), r.len == 2 ? "%02u" : "%u", mo);
          out += buf;
        } else if (r.len == 3) {
          out += std::string(kMonths[mo - 1]).substr(0, 3);
        } else if (r.len == 5) {
          out += kMonths[mo - 1][0];
        } else {
          out += kMonths[mo - 1];
        }
        break;
      }
      case 'd':
        if (r.len <= 2) {
          std::snprintf(buf, sizeof(buf), r.len == 2 ? "%02u" : "%u", d);
          out += buf;
        } else if (r.len == 3) {
          out += std::string(kDays[wd.c_encoding()]).substr(0, 3);
        } else {
          out += kDays[wd.c_encoding()];
        }
        break;
      case 'h': {
        int h = hour;
        if (twelve_hour) {
          h = hour % 12;
          if (h == 0) h = 12;
        }
        std::snprintf(buf, sizeof(buf), r.len >= 2 ? "%02d" : "%d", h);
        out += buf;
        break;
      }
      case 's':
        std::snprintf(buf, sizeof(buf), r.len >= 2 ? "%02d" : "%d", second);
        out += buf;
        break;
      case 'a':
        if (r.len == 5) {
          out += hour < 12 ? "AM" : "PM";
        } else {
          out += hour < 12 ? "A" : "P";
        }
        break;
    }
  }
  return out;
}

}  // namespace

std::optional<std::string> BuiltinFormatCode(int id) {
  switch (id) {
    case 0: return "General";
    case 1: return "0";
    case 2: return "0.00";
    case 3: return "#,##0";
    case 4: return "#,##0.00";
    case 9: return "0%";
    case 10: return "0.00%";
    case 11: return "0.00E+00";
    case 14: return "m/d/yyyy";
    case 15: return "d-mmm-yy";
    case 16: return "d-mmm";
    case 17: return "mmm-yy";
    case 18: return "h:mm AM/PM";
    case 19: return "h:mm:ss AM/PM";
    case 20: return "h:mm";
    case 21: return "h:mm:ss";
    case 22: return "m/d/yyyy h:mm";
    case 37: return "#,##0 ;(#,##0)";
    case 38: return "#,##0 ;[Red](#,##0)";
    case 39: return "#,##0.00;(#,##0.00)";
    case 40: return "#,##0.00;[Red](#,##0.00)";
    case 45: return "mm:ss";
    case 48: return "##0.0E+0";
    case 49: return "@";
    default: return std::nullopt;
  }
}

std::string FormatGeneral(double value) {
  if (std::isnan(value) || std::isinf(value)) return "#NUM!";
  if (value == std::floor(value) && std::fabs(value) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.0f", value);
    std::string s = buf;
    return s == "-0" ? "0" : s;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", value);
  std::string s = buf;
  // %.15g keeps trailing zeros only in exponent form; strip them there too.
  auto e = s.find('e');
  if (e != std::string::npos) {
    std::string mant = s.substr(0, e);
    if (mant.find('.') != std::string::npos) {
      while (mant.back() == '0') mant.pop_back();
      if (mant.back() == '.') mant.pop_back();
    }
    int exp = std::stoi(s.substr(e + 1));
    char eb[16];
    std::snprintf(eb, sizeof(eb), "E%c%02d", exp < 0 ? '-' : '+', std::abs(exp));
    s = mant + eb;
  }
  return s;
}

std::optional<std::string> FormatNumber(double value, std::string_view code) {
  std::vector<std::string> sections = SplitSections(code);
  std::string section = sections[0];
  bool emit_sign = true;
  if (value < 0 && sections.size() >= 2 && !sections[1].empty()) {
    section = sections[1];
    emit_sign = false;
  } else if (value == 0 && sections.size() >= 3 && !sections[2].empty()) {
    section = sections[2];
  }
  std::string lower = section;
  std::transform(lower.begin(), lower.end(), lower.begin(), ::tolower);
  if (lower == "general" || lower == "@" || lower.empty()) {
    return FormatGeneral(emit_sign ? value : std::fabs(value));
  }
  auto toks = Tokenize(section);
  if (!toks) return std::nullopt;
  if (IsDateCode(*toks)) return FormatDate(value, *toks);
  return FormatNumeric(value, *toks, emit_sign);
}

}  // namespace sheetvis::internal
