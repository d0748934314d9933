#include <cstdio>
#include <fstream>
#include <sstream>

#include "pclpv/sdp.hpp"

// SDPA sparse format (.dat-s). The file encodes
//   min cᵀx  s.t.  X = Σ x_i F_i - F_0 ⪰ 0
// so an SdpProblem (max bᵀy, F_0 + Σ y_i F_i ⪯ 0 per block) maps to
// c = -b, F̂_0 = F_0, F̂_i = -F_i. Variable and block names ride along in
// comment lines to make the round trip exact.

namespace pclpv {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_sdpa(const SdpProblem& problem, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("write_sdpa: cannot open " + path);
  out << "*pclpv sdp debug dump\n";
  out << "*NAMES";
  for (const auto& n : problem.variable_names()) out << ' ' << n;
  out << "\n*BLOCKNAMES";
  for (const auto& b : problem.blocks()) out << ' ' << (b.name.empty() ? "-" : b.name);
  out << "\n";
  out << problem.num_variables() << " = mDIM\n";
  out << problem.blocks().size() << " = nBLOCK\n";
  for (size_t b = 0; b < problem.blocks().size(); ++b)
    out << problem.blocks()[b].dim << (b + 1 < problem.blocks().size() ? " " : "");
  out << "\n";
  const Eigen::VectorXd obj = problem.objective_vector();
  for (int i = 0; i < obj.size(); ++i) out << fmt17(-obj[i]) << (i + 1 < obj.size() ? " " : "");
  out << "\n";
  auto emit = [&](int matno, int blkno, const Eigen::SparseMatrix<double>& m, double sign) {
    for (int j = 0; j < m.outerSize(); ++j)
      for (Eigen::SparseMatrix<double>::InnerIterator it(m, j); it; ++it)
        if (it.row() <= it.col())
          out << matno << ' ' << blkno << ' ' << it.row() + 1 << ' ' << it.col() + 1 << ' '
              << fmt17(sign * it.value()) << "\n";
  };
  for (size_t b = 0; b < problem.blocks().size(); ++b) {
    const auto& blk = problem.blocks()[b];
    emit(0, static_cast<int>(b) + 1, blk.constant, 1.0);
  }
  for (int i = 0; i < problem.num_variables(); ++i)
    for (size_t b = 0; b < problem.blocks().size(); ++b)
      for (const auto& [v, c] : problem.blocks()[b].terms)
        if (v == i) emit(i + 1, static_cast<int>(b) + 1, c, -1.0);
}

SdpProblem read_sdpa(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("read_sdpa: cannot open " + path);

  std::vector<std::string> var_names, block_names;
  std::string line;
  // Comment prefix lines; capture the name annotations when present.
  std::streampos data_start = in.tellg();
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '*' || line[0] == '"') {
      std::istringstream ss(line);
      std::string tag;
      ss >> tag;
      std::string word;
      if (tag == "*NAMES")
        while (ss >> word) var_names.push_back(word);
      else if (tag == "*BLOCKNAMES")
        while (ss >> word) block_names.push_back(word);
      data_start = in.tellg();
      continue;
    }
    break;
  }
  in.seekg(data_start);

  auto next_numbers = [&](int count) {
    std::vector<double> vals;
    while (static_cast<int>(vals.size()) < count && std::getline(in, line)) {
      for (auto& ch : line)
        if (ch == ',' || ch == '(' || ch == ')' || ch == '{' || ch == '}') ch = ' ';
      std::istringstream ss(line);
      double v;
      while (ss >> v) vals.push_back(v);
    }
    if (static_cast<int>(vals.size()) < count) throw ConfigError("read_sdpa: truncated file");
    return vals;
  };

  const int m = static_cast<int>(next_numbers(1)[0]);
  const int nblocks = static_cast<int>(next_numbers(1)[0]);
  const std::vector<double> dims = next_numbers(nblocks);
  const std::vector<double> cvec = next_numbers(m);

  SdpProblem problem;
  for (int i = 0; i < m; ++i) {
    problem.add_variable(i < static_cast<int>(var_names.size()) ? var_names[i]
                                                                : "x" + std::to_string(i + 1));
    problem.add_objective(i, -cvec[i]);
  }

  struct Entry {
    int mat, blk, r, c;
    double v;
  };
  std::vector<Entry> entries;
  while (std::getline(in, line)) {
    for (auto& ch : line)
      if (ch == ',') ch = ' ';
    std::istringstream ss(line);
    Entry e;
    if (ss >> e.mat >> e.blk >> e.r >> e.c >> e.v) entries.push_back(e);
  }

  for (int b = 0; b < nblocks; ++b) {
    const int dim = static_cast<int>(std::abs(dims[b]));
    AffineMatrix expr(dim);
    std::map<int, Eigen::MatrixXd> coeffs;
    for (const auto& e : entries) {
      if (e.blk != b + 1) continue;
      const double sign = e.mat == 0 ? 1.0 : -1.0;
      Eigen::MatrixXd piece = Eigen::MatrixXd::Zero(dim, dim);
      piece(e.r - 1, e.c - 1) = sign * e.v;
      if (e.r != e.c) piece(e.c - 1, e.r - 1) = sign * e.v;
      if (e.mat == 0)
        expr.add_constant(piece);
      else
        expr.add_term(e.mat - 1, piece);
    }
    std::string name =
        b < static_cast<int>(block_names.size()) && block_names[b] != "-" ? block_names[b] : "";
    problem.add_block(LmiBlock::negative_semidefinite(name, expr));
  }
  return problem;
}

}  // namespace pclpv
