#include "critl3/snapshot_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <json.hpp>

#include "critl3/error.hpp"

namespace critl3 {
namespace {

static_assert(std::endian::native == std::endian::little, "snapshot IO assumes a little-endian host");

void write_doubles(const std::filesystem::path& p, const double* data, std::size_t n) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw OutputError("cannot write " + p.string());
  os.write(reinterpret_cast<const char*>(data), std::streamsize(n * sizeof(double)));
  if (!os) throw OutputError("short write to " + p.string());
}

void read_doubles(const std::filesystem::path& p, double* data, std::size_t n) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw MalformedField("cannot read " + p.string());
  is.seekg(0, std::ios::end);
  if (std::size_t(is.tellg()) != n * sizeof(double))
    throw MalformedField("component file size disagrees with sidecar: " + p.string());
  is.seekg(0);
  is.read(reinterpret_cast<char*>(data), std::streamsize(n * sizeof(double)));
}

}  // namespace

std::vector<std::filesystem::path> write_snapshot(const VectorField& f,
                                                  const std::filesystem::path& dir,
                                                  const std::string& stem) {
  f.validate();
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw OutputError("cannot create " + dir.string());
  std::vector<std::filesystem::path> written;
  for (int c = 0; c < f.components(); ++c) {
    auto p = dir / (stem + "." + f.component_names()[c] + ".bin");
    if (f.is_physical())
      write_doubles(p, f.real(c).data(), f.real(c).size());
    else
      write_doubles(p, reinterpret_cast<const double*>(f.spec(c).data()), 2 * f.spec(c).size());
    written.push_back(p);
  }
  nlohmann::json side = {{"box_length", f.grid().box_length()},
                         {"resolution", f.grid().resolution()},
                         {"time_stamp", f.time()},
                         {"representation", to_string(f.representation())},
                         {"component_names", f.component_names()}};
  auto sp = dir / (stem + ".json");
  std::ofstream os(sp);
  if (!os) throw OutputError("cannot write " + sp.string());
  os << side.dump(2) << "\n";
  written.push_back(sp);
  return written;
}

VectorField read_snapshot(const std::filesystem::path& dir, const std::string& stem) {
  std::ifstream is(dir / (stem + ".json"));
  if (!is) throw MalformedField("missing sidecar for " + stem);
  nlohmann::json side;
  try {
    is >> side;
    Grid g(side.at("box_length").get<double>(), side.at("resolution").get<int>());
    auto names = side.at("component_names").get<std::vector<std::string>>();
    VectorField f(g, int(names.size()),
                  representation_from_string(side.at("representation").get<std::string>()),
                  side.at("time_stamp").get<double>());
    f.set_component_names(names);
    for (int c = 0; c < f.components(); ++c) {
      auto p = dir / (stem + "." + names[c] + ".bin");
      if (f.is_physical())
        read_doubles(p, f.real(c).data(), f.real(c).size());
      else
        read_doubles(p, reinterpret_cast<double*>(f.spec(c).data()), 2 * f.spec(c).size());
    }
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw MalformedField(std::string("bad sidecar: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw MalformedField(std::string("bad sidecar: ") + e.what());
  }
}

}  // namespace critl3
