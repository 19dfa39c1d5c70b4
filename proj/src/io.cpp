#include "hesslab/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hesslab/errors.hpp"

namespace hesslab {

std::string field_to_csv(const GridField& field) {
  const GridGeometry& g = field.geom();
  std::ostringstream os;
  os.precision(17);
  os << (g.dim() == 2 ? "x,y,u" : "x,y,z,u") << "\n";
  for (std::size_t node = 0; node < g.node_count(); ++node) {
    if (g.node_class(static_cast<int>(node)) == NodeClass::Exterior) continue;
    const Point p = g.node_point(static_cast<int>(node));
    os << p[0] << "," << p[1];
    if (g.dim() == 3) os << "," << p[2];
    os << "," << field.at_node(static_cast<int>(node)) << "\n";
  }
  return os.str();
}

void atomic_write_text(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw invalid_input("atomic_write_text: cannot open " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw invalid_input("atomic_write_text: write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw invalid_input("atomic_write_text: rename failed for " + target.string() + ": " +
                        ec.message());
  }
}

}  // namespace hesslab
