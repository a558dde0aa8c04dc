#include "ppf/scenario_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>

namespace ppf {

namespace {

// Shortest decimal representation that parses back to the same double.
std::string fmt_num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string fmt_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return std::string(buf);
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

// Walks the input line by line; each field consumes the next line that has a
// value part before the ':' comment.
class LineReader {
 public:
  explicit LineReader(const std::string& text) : lines_(split_lines(text)) {}

  std::vector<std::string> next_tokens(const std::string& field) {
    while (pos_ < lines_.size()) {
      const int line_no = static_cast<int>(pos_) + 1;
      std::string value = lines_[pos_++];
      if (const auto colon = value.find(':'); colon != std::string::npos)
        value = value.substr(0, colon);
      for (auto& c : value)
        if (c == ',' || c == '\t') c = ' ';
      std::istringstream is(value);
      std::vector<std::string> tokens;
      std::string tok;
      while (is >> tok) tokens.push_back(tok);
      if (tokens.empty()) continue;  // blank or comment-only line
      last_line_ = line_no;
      return tokens;
    }
    throw ParseError(static_cast<int>(lines_.size()) + 1, field, "unexpected end of file");
  }

  double next_double(const std::string& field) {
    return to_double(next_tokens(field).front(), field);
  }

  long next_int(const std::string& field) { return to_int(next_tokens(field).front(), field); }

  double to_double(const std::string& tok, const std::string& field) const {
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw ParseError(last_line_, field, "cannot parse number '" + tok + "'");
    }
  }

  long to_int(const std::string& tok, const std::string& field) const {
    try {
      std::size_t used = 0;
      const long v = std::stol(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw ParseError(last_line_, field, "cannot parse integer '" + tok + "'");
    }
  }

  int line() const { return last_line_; }

 private:
  std::vector<std::string> lines_;
  std::size_t pos_ = 0;
  int last_line_ = 0;
};

}  // namespace

Scenario parse_input_file(const std::string& text) {
  LineReader r(text);
  Scenario s;

  s.source.frequency_mhz = r.next_double("frequency");
  s.source.antenna_height_m = r.next_double("antenna height");

  const long ant_type = r.next_int("antenna type");
  switch (ant_type) {
    case 1: s.source.antenna.kind = AntennaKind::Omni; break;
    case 2: s.source.antenna.kind = AntennaKind::Gauss; break;
    case 3: s.source.antenna.kind = AntennaKind::SincX; break;
    case 4: s.source.antenna.kind = AntennaKind::Cosec2; break;
    case 5:
    case 6:
      throw ParseError(r.line(), "antenna type", "HTFIND unsupported (antenna types 5 and 6)");
    case 7: s.source.antenna.kind = AntennaKind::UserDefined; break;
    default:
      throw ParseError(r.line(), "antenna type",
                       "unknown code " + std::to_string(ant_type) + " (expected 1..7)");
  }

  const long pol = r.next_int("polarization");
  if (pol == 0)
    s.source.polarization = Polarization::Horizontal;
  else if (pol == 1)
    s.source.polarization = Polarization::Vertical;
  else
    throw ParseError(r.line(), "polarization",
                     "unknown code " + std::to_string(pol) + " (expected 0=HOR or 1=VER)");

  s.source.antenna.beam_width_deg = r.next_double("beam width");
  s.source.antenna.elevation_deg = r.next_double("elevation angle");

  const long cutback = r.next_int("cut-back count");
  if (cutback != 0)
    throw ParseError(r.line(), "cut-back count",
                     "cut-back angles are only used by the unsupported height-finder antennas");

  s.output.min_height_m = r.next_double("minimum output height");
  s.output.max_height_m = r.next_double("maximum output height");
  s.output.max_range_km = r.next_double("maximum output range");
  s.output.n_height_points = static_cast<int>(r.next_int("output height points"));
  s.output.n_range_points = static_cast<int>(r.next_int("output range points"));
  s.extrapolation_flag = static_cast<int>(r.next_int("extrapolation flag"));

  s.atmosphere.surface_humidity_g_m3 = r.next_double("surface humidity");
  s.atmosphere.surface_temperature_c = r.next_double("surface temperature");
  s.atmosphere.gaseous_absorption_db_km = r.next_double("gaseous absorption");

  const long n_wind = r.next_int("wind count");
  if (n_wind < 0) throw ParseError(r.line(), "wind count", "negative count");
  for (long i = 0; i < n_wind; ++i) {
    const auto toks = r.next_tokens("wind entry");
    if (toks.size() != 2)
      throw ParseError(r.line(), "wind entry", "expected 2 values (range km, speed m/s)");
    s.atmosphere.wind_speeds.push_back(
        {r.to_double(toks[0], "wind range"), r.to_double(toks[1], "wind speed")});
  }

  const long n_profiles = r.next_int("refractivity profile count");
  if (n_profiles < 1)
    throw ParseError(r.line(), "refractivity profile count", "at least one profile required");
  const long n_levels = r.next_int("refractivity level count");
  if (n_levels < 1)
    throw ParseError(r.line(), "refractivity level count", "at least one level required");
  for (long p = 0; p < n_profiles; ++p) {
    RefractivityProfile prof;
    prof.start_range_km = r.next_double("refractivity profile range");
    for (long l = 0; l < n_levels; ++l) {
      const auto toks = r.next_tokens("refractivity level");
      if (toks.size() != 2)
        throw ParseError(r.line(), "refractivity level",
                         "expected 2 values (height m, M-unit)");
      prof.levels.push_back(
          {r.to_double(toks[0], "level height"), r.to_double(toks[1], "level M-unit")});
    }
    s.refractivity.profiles.push_back(std::move(prof));
  }

  const long n_comp = r.next_int("ground composition count");
  if (n_comp < 0) throw ParseError(r.line(), "ground composition count", "negative count");
  for (long i = 0; i < n_comp; ++i) {
    const auto toks = r.next_tokens("ground composition");
    if (toks.size() != 4)
      throw ParseError(r.line(), "ground composition",
                       "expected 4 values (range km, type, permittivity, conductivity)");
    GroundComposition c;
    c.start_range_km = r.to_double(toks[0], "composition range");
    c.ground_type = static_cast<int>(r.to_int(toks[1], "ground type"));
    c.permittivity = r.to_double(toks[2], "permittivity");
    c.conductivity_s_m = r.to_double(toks[3], "conductivity");
    s.terrain.compositions.push_back(c);
  }

  const long n_terrain = r.next_int("terrain point count");
  if (n_terrain < 0) throw ParseError(r.line(), "terrain point count", "negative count");
  for (long i = 0; i < n_terrain; ++i) {
    const auto toks = r.next_tokens("terrain point");
    if (toks.size() != 2)
      throw ParseError(r.line(), "terrain point", "expected 2 values (range m, height m)");
    s.terrain.points.push_back(
        {r.to_double(toks[0], "terrain range"), r.to_double(toks[1], "terrain height")});
  }

  return s;
}

std::string write_input_file(const Scenario& s) {
  for (const auto& p : s.refractivity.profiles)
    if (p.levels.size() != s.refractivity.profiles.front().levels.size())
      throw std::invalid_argument(
          "write_input_file: all refractivity profiles must share one level count");

  int ant_code = 1;
  switch (s.source.antenna.kind) {
    case AntennaKind::Omni: ant_code = 1; break;
    case AntennaKind::Gauss: ant_code = 2; break;
    case AntennaKind::SincX: ant_code = 3; break;
    case AntennaKind::Cosec2: ant_code = 4; break;
    case AntennaKind::UserDefined: ant_code = 7; break;
  }

  std::ostringstream os;
  os << fmt_num(s.source.frequency_mhz) << " :Frequency in MHz\n";
  os << fmt_num(s.source.antenna_height_m) << " :Antenna height in m\n";
  os << ant_code
     << " :Antenna type (1=OMNI,2=GAUSS,3=SINC(X),4=COSEC2,5=HTFIND,6=USRHTFIND,7=USRDEF)\n";
  os << (s.source.polarization == Polarization::Horizontal ? 0 : 1)
     << " :Polarization (0=HOR,1=VER)\n";
  os << fmt_num(s.source.antenna.beam_width_deg)
     << " :Beam width in deg (this value is ignored for OMNI and USRDEF antenna)\n";
  os << fmt_num(s.source.antenna.elevation_deg)
     << " :Antenna elevation angle in deg(this value is ignored for OMNI and USRDEF antenna)\n";
  os << "0 :Number of cut-back angles and factors (used for specific height-finder antenna)\n";
  os << fmt_num(s.output.min_height_m) << " :Minimum output height in m\n";
  os << fmt_num(s.output.max_height_m) << " :Maximum output height in m\n";
  os << fmt_num(s.output.max_range_km) << " :Maximum output range in km\n";
  os << s.output.n_height_points << " :Number of output height points\n";
  os << s.output.n_range_points << " :Number of output range points\n";
  os << s.extrapolation_flag << " :Extrapolation flag\n";
  os << fmt_num(s.atmosphere.surface_humidity_g_m3) << " : Surface absolute humidity in g/m3\n";
  os << fmt_num(s.atmosphere.surface_temperature_c) << " : Surface air temperature in degrees\n";
  os << fmt_num(s.atmosphere.gaseous_absorption_db_km)
     << " : Gaseous absorption attenuation rate in dB/km\n";
  os << s.atmosphere.wind_speeds.size() << " : Number of wind speeds/ranges specified\n";
  for (std::size_t i = 0; i < s.atmosphere.wind_speeds.size(); ++i) {
    const auto& w = s.atmosphere.wind_speeds[i];
    os << fmt_num(w.range_km) << " " << fmt_num(w.speed_m_s) << " : Wind range (km) & speed (m/s) "
       << (i + 1) << "\n";
  }
  os << s.refractivity.profiles.size() << " : Number of refractivity profiles\n";
  os << s.refractivity.profiles.front().levels.size()
     << " : Number of levels in refractivity profiles\n";
  for (std::size_t p = 0; p < s.refractivity.profiles.size(); ++p) {
    const auto& prof = s.refractivity.profiles[p];
    os << fmt_num(prof.start_range_km) << " : Range of refractivity profile " << (p + 1)
       << " in km\n";
    for (std::size_t l = 0; l < prof.levels.size(); ++l) {
      os << fmt_num(prof.levels[l].height_m) << " " << fmt_num(prof.levels[l].m_unit)
         << " : Height & M-unit value of ref. profile " << (p + 1) << ", level " << (l + 1)
         << "\n";
    }
  }
  os << s.terrain.compositions.size() << " : Number of ground composition types\n";
  for (const auto& c : s.terrain.compositions) {
    os << fmt_num(c.start_range_km) << ", " << c.ground_type << ", " << fmt_num(c.permittivity)
       << ", " << fmt_num(c.conductivity_s_m)
       << " : Range (km), ground type (integer), permittivity, conductivity\n";
  }
  os << s.terrain.points.size() << " : Number of terrain range/height points\n";
  for (std::size_t i = 0; i < s.terrain.points.size(); ++i) {
    const auto& p = s.terrain.points[i];
    os << fmt_num(p.range_m) << " " << fmt_num(p.height_m) << " : Terrain range (m) & height (m) "
       << (i + 1) << "\n";
  }
  return os.str();
}

std::string write_output_file(const PpfResult& result) {
  std::ostringstream os;
  os << "********Output Loss and Prop. Factor Values*******\n";
  for (std::size_t ir = 0; ir < result.ranges_m.size(); ++ir) {
    os << "\n";
    os << "range in km = " << fmt_fixed(result.ranges_m[ir] / 1000.0, 2) << "\n";
    os << "Height(m) Loss(dB) PFac(dB)\n";
    for (std::size_t ih = 0; ih < result.heights_m.size(); ++ih) {
      os << fmt_fixed(result.heights_m[ih], 2) << " " << fmt_fixed(result.loss_db.at(ih, ir), 2)
         << " " << fmt_fixed(result.amplitude_db.at(ih, ir), 2) << "\n";
    }
  }
  return os.str();
}

std::string write_complex_field_export(const std::vector<double>& heights_m,
                                       const std::vector<ComplexSample>& values,
                                       int profile_index) {
  if (heights_m.size() != values.size())
    throw std::invalid_argument("complex field export: height/value count mismatch");
  if (heights_m.size() < 2)
    throw std::invalid_argument("complex field export: at least two samples required");
  const double step =
      (heights_m.back() - heights_m.front()) / static_cast<double>(heights_m.size() - 1);
  for (std::size_t i = 0; i + 1 < heights_m.size(); ++i) {
    if (std::abs((heights_m[i + 1] - heights_m[i]) - step) > 1e-9)
      throw std::invalid_argument("complex field export: non-uniform height step");
  }

  std::ostringstream os;
  os << profile_index << " " << heights_m.size() << "\n";
  char hbuf[64];
  for (std::size_t i = 0; i < heights_m.size(); ++i) {
    std::snprintf(hbuf, sizeof(hbuf), "%.10g", heights_m[i]);
    const double re = values[i].re == 0.0 ? 0.0 : values[i].re;  // normalize -0
    const double im = values[i].im == 0.0 ? 0.0 : values[i].im;
    os << hbuf << " ( " << fmt_fixed(re, 12) << " , " << fmt_fixed(im, 12) << " )\n";
  }
  return os.str();
}

ComplexFieldColumn read_complex_field_export(const std::string& text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(1, "complex field header", "empty input");

  ComplexFieldColumn col;
  std::size_t count = 0;
  {
    std::istringstream is(lines[0]);
    long idx = 0;
    if (!(is >> idx >> count))
      throw ParseError(1, "complex field header", "expected '<profile_index> <count>'");
    col.profile_index = static_cast<int>(idx);
  }
  for (std::size_t i = 0; i < count; ++i) {
    const int line_no = static_cast<int>(i) + 2;
    if (i + 1 >= lines.size())
      throw ParseError(line_no, "complex field sample", "unexpected end of file");
    std::string l = lines[i + 1];
    for (auto& c : l)
      if (c == '(' || c == ')' || c == ',') c = ' ';
    std::istringstream is(l);
    double h = 0, re = 0, im = 0;
    if (!(is >> h >> re >> im))
      throw ParseError(line_no, "complex field sample", "expected 'height ( re , im )'");
    col.heights_m.push_back(h);
    col.values.push_back({re, im});
  }
  return col;
}

std::vector<std::string> validate_scenario(const Scenario& s) {
  std::vector<std::string> issues;
  const auto bad = [&issues](const std::string& msg) { issues.push_back(msg); };

  if (!(s.source.frequency_mhz > 0.0)) bad("frequency: must be positive");
  if (s.source.antenna_height_m < 0.0) bad("antenna_height: must be non-negative");

  switch (s.source.antenna.kind) {
    case AntennaKind::Gauss:
    case AntennaKind::SincX:
    case AntennaKind::Cosec2:
      if (!(s.source.antenna.beam_width_deg > 0.0))
        bad("beam_width: must be positive for GAUSS/SINC(X)/COSEC2 antennas");
      break;
    case AntennaKind::UserDefined: {
      const auto& tb = s.source.antenna.table;
      if (tb.empty()) {
        bad("antenna: user-defined pattern requires a non-empty table");
      } else {
        for (std::size_t i = 0; i < tb.size(); ++i) {
          if (i > 0 && !(tb[i].first > tb[i - 1].first)) {
            bad("antenna: user table angles must be strictly ascending");
            break;
          }
          if (tb[i].second < 0.0 || tb[i].second > 1.0) {
            bad("antenna: user table factors must lie in [0, 1]");
            break;
          }
        }
      }
      break;
    }
    default: break;
  }

  if (!(s.output.min_height_m < s.output.max_height_m))
    bad("output: min_height must be below max_height");
  if (!(s.output.max_range_km > 0.0)) bad("output: max_range must be positive");
  if (s.output.n_height_points < 2) bad("output: n_height_points must be at least 2");
  if (s.output.n_range_points < 2) bad("output: n_range_points must be at least 2");

  if (s.atmosphere.surface_humidity_g_m3 < 0.0) bad("humidity: must be non-negative");
  if (s.atmosphere.gaseous_absorption_db_km < 0.0) bad("absorption: must be non-negative");

  if (s.refractivity.profiles.empty()) {
    bad("refractivity: at least one profile required");
  } else {
    if (std::abs(s.refractivity.profiles.front().start_range_km) > 1e-12)
      bad("refractivity: first profile must start at range 0");
    for (std::size_t p = 0; p < s.refractivity.profiles.size(); ++p) {
      const auto& prof = s.refractivity.profiles[p];
      if (p > 0 &&
          !(prof.start_range_km > s.refractivity.profiles[p - 1].start_range_km))
        bad("refractivity: profile start ranges must be strictly ascending");
      if (prof.levels.empty()) {
        bad("refractivity: profile " + std::to_string(p + 1) + " has no levels");
        continue;
      }
      for (std::size_t l = 0; l < prof.levels.size(); ++l) {
        if (!std::isfinite(prof.levels[l].m_unit)) {
          bad("refractivity: non-finite M-unit value");
          break;
        }
        if (l > 0 && !(prof.levels[l].height_m > prof.levels[l - 1].height_m)) {
          bad("refractivity: level heights must be strictly ascending");
          break;
        }
      }
    }
  }

  for (std::size_t i = 0; i < s.terrain.points.size(); ++i) {
    if (!std::isfinite(s.terrain.points[i].height_m) ||
        !std::isfinite(s.terrain.points[i].range_m)) {
      bad("terrain: non-finite point");
      break;
    }
    if (i > 0 && !(s.terrain.points[i].range_m > s.terrain.points[i - 1].range_m)) {
      bad("terrain: point ranges must be strictly ascending");
      break;
    }
  }
  for (std::size_t i = 1; i < s.terrain.compositions.size(); ++i) {
    if (!(s.terrain.compositions[i].start_range_km >
          s.terrain.compositions[i - 1].start_range_km)) {
      bad("ground composition: start ranges must be strictly ascending");
      break;
    }
  }

  if (s.pe.absorber_fraction &&
      (*s.pe.absorber_fraction < 0.0 || *s.pe.absorber_fraction >= 0.5))
    bad("absorber_fraction: must lie in [0, 0.5)");
  if (s.pe.transform_size) {
    const auto n = *s.pe.transform_size;
    if (n < 4 || (n & (n - 1)) != 0) bad("transform_size: must be a power of two >= 4");
  }
  if (s.pe.z_max_m && !(*s.pe.z_max_m > 0.0)) bad("z_max: must be positive");
  if (s.pe.delta_r_m && !(*s.pe.delta_r_m > 0.0)) bad("delta_r: must be positive");

  return issues;
}

void validate_scenario_or_throw(const Scenario& scenario) {
  auto issues = validate_scenario(scenario);
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

std::string scenario_digest(const Scenario& s) {
  // Field dump independent of the writer so it works for any scenario.
  std::ostringstream os;
  os << fmt_num(s.source.frequency_mhz) << '|' << fmt_num(s.source.antenna_height_m) << '|'
     << static_cast<int>(s.source.antenna.kind) << '|'
     << static_cast<int>(s.source.polarization) << '|'
     << fmt_num(s.source.antenna.beam_width_deg) << '|'
     << fmt_num(s.source.antenna.elevation_deg) << '|';
  for (const auto& [a, f] : s.source.antenna.table) os << fmt_num(a) << ',' << fmt_num(f) << ';';
  os << '|' << fmt_num(s.output.min_height_m) << '|' << fmt_num(s.output.max_height_m) << '|'
     << fmt_num(s.output.max_range_km) << '|' << s.output.n_height_points << '|'
     << s.output.n_range_points << '|' << s.extrapolation_flag << '|'
     << fmt_num(s.atmosphere.surface_humidity_g_m3) << '|'
     << fmt_num(s.atmosphere.surface_temperature_c) << '|'
     << fmt_num(s.atmosphere.gaseous_absorption_db_km) << '|';
  for (const auto& w : s.atmosphere.wind_speeds)
    os << fmt_num(w.range_km) << ',' << fmt_num(w.speed_m_s) << ';';
  os << '|';
  for (const auto& p : s.refractivity.profiles) {
    os << fmt_num(p.start_range_km) << ':';
    for (const auto& l : p.levels) os << fmt_num(l.height_m) << ',' << fmt_num(l.m_unit) << ';';
  }
  os << '|';
  for (const auto& c : s.terrain.compositions)
    os << fmt_num(c.start_range_km) << ',' << c.ground_type << ',' << fmt_num(c.permittivity)
       << ',' << fmt_num(c.conductivity_s_m) << ';';
  os << '|';
  for (const auto& p : s.terrain.points) os << fmt_num(p.range_m) << ',' << fmt_num(p.height_m) << ';';
  os << '|';
  if (s.pe.transform_size) os << *s.pe.transform_size;
  os << '|';
  if (s.pe.z_max_m) os << fmt_num(*s.pe.z_max_m);
  os << '|';
  if (s.pe.delta_r_m) os << fmt_num(*s.pe.delta_r_m);
  os << '|';
  if (s.pe.absorber_fraction) os << fmt_num(*s.pe.absorber_fraction);

  const std::string data = os.str();
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace ppf
