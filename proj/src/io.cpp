#include "pwlab/io.hpp"

#include <cstdio>
#include <cstring>
#include <functional>
#include <algorithm>
#include <fstream>
#include <sstream>

#include "pwlab/error.hpp"

namespace pwlab::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, mode);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  return in;
}

// Row-major block of `width` reals per node.
void write_block(const fs::path& dir, const std::string& name, Encoding enc,
                 std::size_t nodes, int width,
                 const std::function<double(std::size_t, int)>& at, json& header) {
  if (enc == Encoding::csv) {
    const auto file = name + ".csv";
    auto out = open_out(dir / file);
    for (std::size_t i = 0; i < nodes; ++i) {
      for (int c = 0; c < width; ++c) {
        if (c) out << ',';
        out << format_double(at(i, c));
      }
      out << '\n';
    }
    header["values"] = file;
    header["encoding"] = "csv";
  } else {
    const auto file = name + ".bin";
    auto out = open_out(dir / file, std::ios::binary);
    for (std::size_t i = 0; i < nodes; ++i)
      for (int c = 0; c < width; ++c) {
        const double v = at(i, c);
        out.write(reinterpret_cast<const char*>(&v), sizeof v);
      }
    header["values"] = file;
    header["encoding"] = "f64le";
  }
  header["layout"] = "row-major";
  header["columns_per_node"] = width;
}

std::vector<double> read_block(const fs::path& header_path, const json& header,
                               std::size_t nodes) {
  const int width = header.at("columns_per_node").get<int>();
  const fs::path file = header_path.parent_path() / header.at("values").get<std::string>();
  std::vector<double> out;
  out.reserve(nodes * static_cast<std::size_t>(width));
  if (header.at("encoding") == "csv") {
    auto in = open_in(file);
    std::string line;
    while (std::getline(in, line)) {
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
    }
  } else {
    auto in = open_in(file, std::ios::binary);
    out.resize(nodes * static_cast<std::size_t>(width));
    in.read(reinterpret_cast<char*>(out.data()),
            static_cast<std::streamsize>(out.size() * sizeof(double)));
  }
  if (out.size() != nodes * static_cast<std::size_t>(width))
    throw Error(ErrorKind::Io, "value block size does not match header in " + file.string());
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json to_json(const GridSpec& grid) {
  std::vector<double> lo, hi;
  for (int a = 0; a < grid.dim(); ++a) {
    lo.push_back(grid.lo(a));
    hi.push_back(grid.hi(a));
  }
  return {{"dim", grid.dim()},
          {"points", grid.shape()},
          {"lo", lo},
          {"hi", hi},
          {"boundary", "periodic"}};
}

GridSpec grid_from_json(const json& j) {
  return GridSpec(j.at("points").get<std::vector<int>>(), j.at("lo").get<std::vector<double>>(),
                  j.at("hi").get<std::vector<double>>());
}

json to_json(const ParticleModel& model) {
  json j{{"masses", model.masses}};
  if (!model.labels.empty()) j["labels"] = model.labels;
  return j;
}

json point_json(const Point& p, int dim) {
  return std::vector<double>(p.begin(), p.begin() + dim);
}

Point point_from_json(const json& j, int dim) {
  const auto v = j.get<std::vector<double>>();
  if (static_cast<int>(v.size()) != dim)
    throw Error(ErrorKind::InvalidArgument, "point needs " + std::to_string(dim) + " entries");
  Point p{};
  for (int a = 0; a < dim; ++a) p[a] = v[a];
  return p;
}

void write_snapshot(const fs::path& dir, const std::string& name, const WaveFunction& psi,
                    Encoding enc) {
  json header{{"kind", "wavefunction"},
              {"grid", to_json(psi.grid)},
              {"time", psi.time},
              {"twist", point_json(psi.twist, psi.grid.dim())},
              {"global_phase", psi.global_phase},
              {"columns", {"re", "im"}}};
  write_block(dir, name, enc, psi.amplitudes.size(), 2,
              [&](std::size_t i, int c) {
                return c == 0 ? psi.amplitudes[i].real() : psi.amplitudes[i].imag();
              },
              header);
  write_json(dir / (name + ".json"), header);
}

void write_snapshot(const fs::path& dir, const std::string& name, const DensityField& rho,
                    Encoding enc) {
  json header{{"kind", "density"},
              {"grid", to_json(rho.grid)},
              {"time", rho.time},
              {"probability", rho.probability},
              {"columns", {"rho"}}};
  write_block(dir, name, enc, rho.values.size(), 1,
              [&](std::size_t i, int) { return rho.values[i]; }, header);
  write_json(dir / (name + ".json"), header);
}

void write_snapshot(const fs::path& dir, const std::string& name, const VectorField& field,
                    Encoding enc) {
  const int d = field.grid.dim();
  json columns = json::array();
  for (int a = 0; a < d; ++a) columns.push_back("v" + std::to_string(a));
  columns.push_back("valid");
  json header{{"kind", "vector_field"},
              {"grid", to_json(field.grid)},
              {"time", field.time},
              {"columns", columns}};
  write_block(dir, name, enc, field.grid.size(), d + 1,
              [&](std::size_t i, int c) {
                if (c == d) return field.valid.empty() || field.valid[i] ? 1.0 : 0.0;
                const bool ok = field.valid.empty() || field.valid[i];
                return ok ? field.components[c][i] : 0.0;
              },
              header);
  write_json(dir / (name + ".json"), header);
}

WaveFunction read_wavefunction(const fs::path& header_path) {
  const json header = read_json(header_path);
  if (header.at("kind") != "wavefunction")
    throw Error(ErrorKind::Io, header_path.string() + " is not a wavefunction snapshot");
  const GridSpec grid = grid_from_json(header.at("grid"));
  const auto values = read_block(header_path, header, grid.size());
  std::vector<Complex> amp(grid.size());
  for (std::size_t i = 0; i < amp.size(); ++i) amp[i] = {values[2 * i], values[2 * i + 1]};
  WaveFunction psi(grid, std::move(amp), header.at("time").get<double>());
  psi.twist = point_from_json(header.at("twist"), grid.dim());
  psi.global_phase = header.at("global_phase").get<double>();
  return psi;
}

DensityField read_density(const fs::path& header_path) {
  const json header = read_json(header_path);
  if (header.at("kind") != "density")
    throw Error(ErrorKind::Io, header_path.string() + " is not a density snapshot");
  DensityField rho;
  rho.grid = grid_from_json(header.at("grid"));
  rho.time = header.at("time").get<double>();
  rho.probability = header.at("probability").get<bool>();
  rho.values = read_block(header_path, header, rho.grid.size());
  return rho;
}

void write_evolution(const fs::path& dir, const EvolutionRecord& record, Encoding enc) {
  json index = json::array();
  for (std::size_t i = 0; i < record.snapshots.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "psi_%05zu", i);
    write_snapshot(dir, name, record.snapshots[i], enc);
    index.push_back({{"time", record.snapshots[i].time}, {"header", std::string(name) + ".json"}});
  }
  write_json(dir / "evolution.json", {{"dt", record.dt},
                                      {"scheme", record.scheme},
                                      {"potential", record.potential.descriptor()},
                                      {"model", to_json(record.model)},
                                      {"grid", to_json(record.grid())},
                                      {"snapshots", index}});
}

EvolutionRecord read_evolution(const fs::path& dir) {
  const json manifest = read_json(dir / "evolution.json");
  EvolutionRecord record;
  record.dt = manifest.at("dt").get<double>();
  record.scheme = manifest.at("scheme").get<std::string>();
  record.model.masses = manifest.at("model").at("masses").get<std::vector<double>>();
  for (const auto& s : manifest.at("snapshots"))
    record.snapshots.push_back(read_wavefunction(dir / s.at("header").get<std::string>()));
  record.validate();
  return record;
}

void write_trajectories_csv(const fs::path& path, const std::vector<Trajectory>& trajectories) {
  auto out = open_out(path);
  const int d = trajectories.empty() ? 1 : trajectories.front().dim;
  const bool vel = !trajectories.empty() && trajectories.front().has_velocities();
  out << "id,time";
  for (int a = 0; a < d; ++a) out << ",x" << a;
  if (vel)
    for (int a = 0; a < d; ++a) out << ",v" << a;
  out << '\n';
  for (std::size_t id = 0; id < trajectories.size(); ++id) {
    const auto& t = trajectories[id];
    for (std::size_t k = 0; k < t.times.size(); ++k) {
      out << id << ',' << format_double(t.times[k]);
      for (int a = 0; a < d; ++a) out << ',' << format_double(t.points[k][a]);
      if (vel)
        for (int a = 0; a < d; ++a)
          out << ',' << (t.has_velocities() ? format_double(t.velocities[k][a]) : "nan");
      out << '\n';
    }
  }
}

std::vector<Trajectory> read_trajectories_csv(const fs::path& path, int dim) {
  auto in = open_in(path);
  std::string line;
  std::getline(in, line);
  const bool vel = std::count(line.begin(), line.end(), ',') == 1 + 2 * dim;
  std::vector<Trajectory> out;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(std::stod(cell));
    const auto id = static_cast<std::size_t>(cells.at(0));
    if (id >= out.size()) {
      out.resize(id + 1);
      out[id].dim = dim;
    }
    auto& t = out[id];
    t.times.push_back(cells.at(1));
    Point p{}, v{};
    for (int a = 0; a < dim; ++a) p[a] = cells.at(2 + a);
    t.points.push_back(p);
    if (vel) {
      for (int a = 0; a < dim; ++a) v[a] = cells.at(2 + dim + a);
      t.velocities.push_back(v);
    }
  }
  return out;
}

void write_trajectory_sidecar(const fs::path& path, const GridSpec& grid,
                              const ParticleModel& model, const std::string& scheme,
                              const json& options) {
  write_json(path, {{"grid", to_json(grid)},
                    {"model", to_json(model)},
                    {"scheme", scheme},
                    {"options", options}});
}

void write_points_csv(const fs::path& path, const std::vector<Point>& points,
                      const std::vector<double>& weights, int dim) {
  auto out = open_out(path);
  for (int a = 0; a < dim; ++a) out << (a ? "," : "") << 'x' << a;
  out << ",weight\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (int a = 0; a < dim; ++a) out << (a ? "," : "") << format_double(points[i][a]);
    const double w = weights.empty() ? 1.0 / static_cast<double>(points.size()) : weights[i];
    out << ',' << format_double(w) << '\n';
  }
}

void write_json(const fs::path& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

json read_json(const fs::path& path) {
  auto in = open_in(path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Io, path.string() + ": " + e.what());
  }
}

}  // namespace pwlab::io
