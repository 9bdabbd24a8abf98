#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pwlab/fields.hpp"
#include "pwlab/potential.hpp"
#include "pwlab/schrodinger.hpp"
#include "pwlab/trajectory.hpp"
#include "json.hpp"

namespace pwlab::io {

// Snapshot format: <name>.json header plus a value block <name>.csv or
// <name>.bin (little-endian float64). Values are row-major in GridSpec axis
// order, last axis fastest. Complex fields store (re, im) pairs.
enum class Encoding { csv, binary };

nlohmann::json to_json(const GridSpec& grid);
GridSpec grid_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ParticleModel& model);
nlohmann::json point_json(const Point& p, int dim);
Point point_from_json(const nlohmann::json& j, int dim);

/// Formats a double so that it parses back to the same value.
std::string format_double(double x);

void write_snapshot(const std::filesystem::path& dir, const std::string& name,
                    const WaveFunction& psi, Encoding enc = Encoding::csv);
void write_snapshot(const std::filesystem::path& dir, const std::string& name,
                    const DensityField& rho, Encoding enc = Encoding::csv);
void write_snapshot(const std::filesystem::path& dir, const std::string& name,
                    const VectorField& field, Encoding enc = Encoding::csv);

/// Reads a wavefunction snapshot given its header path.
WaveFunction read_wavefunction(const std::filesystem::path& header);
DensityField read_density(const std::filesystem::path& header);

/// Writes every snapshot plus evolution.json (dt, scheme, potential, model,
/// snapshot index).
void write_evolution(const std::filesystem::path& dir, const EvolutionRecord& record,
                     Encoding enc = Encoding::csv);
EvolutionRecord read_evolution(const std::filesystem::path& dir);

/// CSV columns: id, time, x0..x{d-1}, then v0..v{d-1} when velocities are
/// stored.
void write_trajectories_csv(const std::filesystem::path& path,
                            const std::vector<Trajectory>& trajectories);
std::vector<Trajectory> read_trajectories_csv(const std::filesystem::path& path,
                                              int dim);
/// JSON sidecar naming grid, model, scheme and options.
void write_trajectory_sidecar(const std::filesystem::path& path, const GridSpec& grid,
                              const ParticleModel& model, const std::string& scheme,
                              const nlohmann::json& options);

void write_points_csv(const std::filesystem::path& path, const std::vector<Point>& points,
                      const std::vector<double>& weights, int dim);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace pwlab::io
