#include "lnss/checkpoint.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "lnss/numeric.hpp"

namespace lnss {

namespace {

constexpr const char* kMagic = "lnsslab-checkpoint v1";

void write_tensor(std::ostream& out, const std::string& name, const Matrix& m) {
  out << "tensor " << name << ' ' << m.rows << ' ' << m.cols << '\n';
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) {
      if (c) out << ' ';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
}

void write_vector(std::ostream& out, const std::string& name, const std::vector<double>& v) {
  out << "tensor " << name << " 1 " << v.size() << '\n';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out << ' ';
    out << format_double(v[i]);
  }
  out << '\n';
}

void write_mlp(std::ostream& out, const std::string& name, const MlpParams& p) {
  out << "mlp " << name << ' ' << (p.output == OutputKind::TanhScaled ? "tanh" : "linear") << ' '
      << format_double(p.bound) << '\n';
  for (int i = 0; i < 3; ++i) {
    write_tensor(out, name + ".w" + std::to_string(i), p.w[i]);
    write_vector(out, name + ".b" + std::to_string(i), p.b[i]);
  }
}

std::string expect_line(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(std::string("checkpoint truncated at ") + what);
  return line;
}

Matrix read_tensor(std::istream& in, const std::string& expected_name) {
  std::istringstream header(expect_line(in, expected_name.c_str()));
  std::string tag, name;
  std::size_t rows = 0, cols = 0;
  header >> tag >> name >> rows >> cols;
  if (tag != "tensor" || name != expected_name)
    throw std::runtime_error("checkpoint: expected tensor " + expected_name);
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    std::istringstream row(expect_line(in, expected_name.c_str()));
    for (std::size_t c = 0; c < cols; ++c) {
      if (!(row >> m(r, c))) throw std::runtime_error("checkpoint: short row in " + expected_name);
    }
  }
  return m;
}

MlpParams read_mlp(std::istream& in, const std::string& expected_name) {
  std::istringstream header(expect_line(in, expected_name.c_str()));
  std::string tag, name, kind;
  double bound = 1.0;
  header >> tag >> name >> kind >> bound;
  if (tag != "mlp" || name != expected_name)
    throw std::runtime_error("checkpoint: expected mlp " + expected_name);
  MlpParams p;
  p.output = kind == "tanh" ? OutputKind::TanhScaled : OutputKind::Linear;
  p.bound = bound;
  for (int i = 0; i < 3; ++i) {
    p.w[i] = read_tensor(in, name + ".w" + std::to_string(i));
    const Matrix b = read_tensor(in, name + ".b" + std::to_string(i));
    p.b[i].assign(b.data.begin(), b.data.end());
  }
  return p;
}

}  // namespace

void save_agent(const std::filesystem::path& path, const Td3Agent& agent) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path.string());
  out << kMagic << '\n';
  out << "meta state_dim " << agent.state_dim() << '\n';
  out << "meta action_dim " << agent.action_dim() << '\n';
  out << "meta hidden " << agent.actor().hidden_dim() << '\n';
  write_mlp(out, "actor", agent.actor());
  write_mlp(out, "actor_target", agent.actor_target());
  write_mlp(out, "critic1", agent.critic(1));
  write_mlp(out, "critic1_target", agent.critic_target(1));
  write_mlp(out, "critic2", agent.critic(2));
  write_mlp(out, "critic2_target", agent.critic_target(2));
}

Td3Agent load_agent(const std::filesystem::path& path, const Td3Options& opts) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read checkpoint: " + path.string());
  if (expect_line(in, "magic") != kMagic) throw std::runtime_error("not a checkpoint file");

  std::size_t state_dim = 0, action_dim = 0, hidden = 0;
  for (auto* field : {&state_dim, &action_dim, &hidden}) {
    std::istringstream meta(expect_line(in, "meta"));
    std::string tag, name;
    meta >> tag >> name >> *field;
    if (tag != "meta") throw std::runtime_error("checkpoint: missing meta line");
  }

  Rng scratch(0);
  Td3Agent agent(state_dim, action_dim, hidden, opts, scratch);
  agent.actor() = read_mlp(in, "actor");
  agent.actor_target() = read_mlp(in, "actor_target");
  agent.critic(1) = read_mlp(in, "critic1");
  agent.critic_target(1) = read_mlp(in, "critic1_target");
  agent.critic(2) = read_mlp(in, "critic2");
  agent.critic_target(2) = read_mlp(in, "critic2_target");
  return agent;
}

}  // namespace lnss
