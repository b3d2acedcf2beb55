#include "geolin/model.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "geolin/rng.hpp"

namespace geolin {

namespace {

Vec6 joint_screw(const JointType& joint) {
  Vec6 gamma = Vec6::Zero();
  switch (joint.kind) {
    case JointKind::Revolute:
      gamma.tail<3>() = joint.axis;
      break;
    case JointKind::Prismatic:
      gamma.head<3>() = joint.axis;
      break;
    case JointKind::Helical:
      gamma.head<3>() = joint.pitch * joint.axis;
      gamma.tail<3>() = joint.axis;
      break;
  }
  return gamma;
}

}  // namespace

JointKinematics jcalc(const JointType& joint, double s) {
  const Vec6 gamma = joint_screw(joint);
  // The joint displaces the child frame by exp(s * gamma) relative to the
  // predecessor frame, so the child-from-predecessor transform is built from
  // the inverse displacement.
  return {velocity_transform(se3_exp(-s * gamma)), gamma};
}

Mat6 jcalc_deriv(const JointType& joint, double s) {
  // X(s) = expm(-s * cross_motion(gamma)), hence dX/ds = -gamma_x * X(s).
  const Vec6 gamma = joint_screw(joint);
  return -cross_motion(gamma) * velocity_transform(se3_exp(-s * gamma));
}

void MultibodyModel::validate() const {
  const auto n = static_cast<std::size_t>(n_bodies);
  if (parent.size() != n || joints.size() != n || fixed_transforms.size() != n ||
      inertias.size() != n + 1) {
    throw ModelError("model arrays do not match n_bodies = " + std::to_string(n_bodies));
  }
  for (int i = 1; i <= n_bodies; ++i) {
    if (parent_of(i) < 0 || parent_of(i) >= i) {
      throw ModelError("topology error: parent of body " + std::to_string(i) + " is " +
                       std::to_string(parent_of(i)) + ", must be in [0, " + std::to_string(i - 1) +
                       "]");
    }
    const JointType& j = joint(i);
    if (std::abs(j.axis.norm() - 1.0) > 1e-12) {
      throw ModelError("joint " + std::to_string(i) + ": axis is not unit norm");
    }
    if (!std::isfinite(j.pitch)) {
      throw ModelError("joint " + std::to_string(i) + ": pitch is not finite");
    }
  }
  for (std::size_t i = 0; i < inertias.size(); ++i) {
    const SpatialInertia& m = inertias[i];
    if ((m - m.transpose()).norm() > 1e-12 * std::max(1.0, m.norm())) {
      throw ModelError("inertia of body " + std::to_string(i) + " is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Mat6> eig(m);
    if (eig.eigenvalues().minCoeff() <= 0.0) {
      throw ModelError("inertia of body " + std::to_string(i) + " is not positive definite");
    }
  }
}

namespace {

double parse_double(int line_no, const std::string& field, std::string_view token) {
  const std::string buf(token);
  char* end = nullptr;
  const double value = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size() || buf.empty()) {
    throw ParseError(line_no, field, "'" + buf + "' is not a number");
  }
  return value;
}

std::vector<double> parse_double_list(int line_no, const std::string& field, std::string_view csv,
                                      std::size_t expected) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const std::size_t comma = csv.find(',', start);
    const std::size_t end = (comma == std::string_view::npos) ? csv.size() : comma;
    values.push_back(parse_double(line_no, field, csv.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (values.size() != expected) {
    throw ParseError(line_no, field,
                     "expected " + std::to_string(expected) + " values, got " +
                         std::to_string(values.size()));
  }
  return values;
}

SpatialInertia inertia_from_upper_triangle(const std::vector<double>& v) {
  SpatialInertia m;
  std::size_t k = 0;
  for (int r = 0; r < 6; ++r) {
    for (int c = r; c < 6; ++c) {
      m(r, c) = v[k];
      m(c, r) = v[k];
      ++k;
    }
  }
  return m;
}

std::vector<double> upper_triangle(const SpatialInertia& m) {
  std::vector<double> v;
  v.reserve(21);
  for (int r = 0; r < 6; ++r) {
    for (int c = r; c < 6; ++c) v.push_back(m(r, c));
  }
  return v;
}

struct BodyLine {
  int id = 0;
  int parent = -1;
  JointType joint;
  Pose xform;
  SpatialInertia inertia;
};

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

}  // namespace

MultibodyModel load_model(std::string_view text) {
  std::istringstream stream{std::string(text)};
  std::string line;
  int line_no = 0;

  bool have_base = false;
  SpatialInertia base_inertia = SpatialInertia::Zero();
  std::vector<BodyLine> bodies;

  while (std::getline(stream, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;

    if (tokens[0] == "base") {
      if (have_base) throw ParseError(line_no, "base", "duplicate base line");
      bool have_inertia = false;
      for (std::size_t t = 1; t < tokens.size(); ++t) {
        const std::string& tok = tokens[t];
        if (tok.rfind("inertia=", 0) == 0) {
          base_inertia = inertia_from_upper_triangle(
              parse_double_list(line_no, "inertia", tok.substr(8), 21));
          have_inertia = true;
        } else {
          throw ParseError(line_no, tok, "unknown field on base line");
        }
      }
      if (!have_inertia) throw ParseError(line_no, "inertia", "base line is missing inertia=");
      have_base = true;
    } else if (tokens[0] == "body") {
      if (tokens.size() < 2) throw ParseError(line_no, "body", "missing body id");
      BodyLine body;
      body.id = static_cast<int>(parse_double(line_no, "body", tokens[1]));
      bool have_parent = false, have_joint = false, have_axis = false, have_xform = false,
           have_inertia = false;
      for (std::size_t t = 2; t < tokens.size(); ++t) {
        const std::string& tok = tokens[t];
        const std::size_t eq = tok.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, tok, "expected key=value");
        const std::string key = tok.substr(0, eq);
        const std::string value = tok.substr(eq + 1);
        if (key == "parent") {
          body.parent = static_cast<int>(parse_double(line_no, key, value));
          have_parent = true;
        } else if (key == "joint") {
          if (value == "revolute") body.joint.kind = JointKind::Revolute;
          else if (value == "prismatic") body.joint.kind = JointKind::Prismatic;
          else if (value == "helical") body.joint.kind = JointKind::Helical;
          else throw ParseError(line_no, key, "unknown joint type '" + value + "'");
          have_joint = true;
        } else if (key == "axis") {
          if (value == "x") body.joint.axis = Vec3::UnitX();
          else if (value == "y") body.joint.axis = Vec3::UnitY();
          else if (value == "z") body.joint.axis = Vec3::UnitZ();
          else throw ParseError(line_no, key, "axis must be x, y, or z");
          have_axis = true;
        } else if (key == "pitch") {
          body.joint.pitch = parse_double(line_no, key, value);
        } else if (key == "xform") {
          const auto v = parse_double_list(line_no, key, value, 12);
          body.xform.rotation << v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8];
          body.xform.origin << v[9], v[10], v[11];
          have_xform = true;
        } else if (key == "inertia") {
          body.inertia = inertia_from_upper_triangle(parse_double_list(line_no, key, value, 21));
          have_inertia = true;
        } else {
          throw ParseError(line_no, key, "unknown field");
        }
      }
      if (!have_parent) throw ParseError(line_no, "parent", "missing");
      if (!have_joint) throw ParseError(line_no, "joint", "missing");
      if (!have_axis) throw ParseError(line_no, "axis", "missing");
      if (!have_xform) throw ParseError(line_no, "xform", "missing");
      if (!have_inertia) throw ParseError(line_no, "inertia", "missing");
      bodies.push_back(body);
    } else {
      throw ParseError(line_no, tokens[0], "expected 'base' or 'body'");
    }
  }

  if (!have_base) throw ParseError(line_no, "base", "document has no base line");

  MultibodyModel model;
  model.n_bodies = static_cast<int>(bodies.size());
  model.parent.resize(bodies.size());
  model.joints.resize(bodies.size());
  model.fixed_transforms.resize(bodies.size());
  model.inertias.assign(bodies.size() + 1, SpatialInertia::Zero());
  model.inertias[0] = base_inertia;

  std::vector<bool> seen(bodies.size() + 1, false);
  for (const BodyLine& body : bodies) {
    if (body.id < 1 || body.id > model.n_bodies || seen[body.id]) {
      throw ModelError("body ids must cover 1.." + std::to_string(model.n_bodies) +
                       " exactly once; offending id " + std::to_string(body.id));
    }
    seen[body.id] = true;
    if (body.parent >= body.id) {
      throw ModelError("topology error: body " + std::to_string(body.id) + " has parent " +
                       std::to_string(body.parent));
    }
    model.parent[body.id - 1] = body.parent;
    model.joints[body.id - 1] = body.joint;
    model.fixed_transforms[body.id - 1] = body.xform;
    model.inertias[body.id] = body.inertia;
  }

  model.validate();
  return model;
}

MultibodyModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_model(buf.str());
}

std::string save_model(const MultibodyModel& model) {
  std::ostringstream out;
  out.precision(17);
  auto write_list = [&out](const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
  };

  out << "base inertia=";
  write_list(upper_triangle(model.inertias[0]));
  out << "\n";
  for (int i = 1; i <= model.n_bodies; ++i) {
    const JointType& j = model.joint(i);
    out << "body " << i << " parent=" << model.parent_of(i) << " joint=";
    switch (j.kind) {
      case JointKind::Revolute: out << "revolute"; break;
      case JointKind::Prismatic: out << "prismatic"; break;
      case JointKind::Helical: out << "helical"; break;
    }
    out << " axis=" << (j.axis.x() > 0.5 ? "x" : (j.axis.y() > 0.5 ? "y" : "z"));
    if (j.kind == JointKind::Helical) out << " pitch=" << j.pitch;
    const Pose& x = model.fixed_transform(i);
    out << " xform=";
    std::vector<double> xv;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) xv.push_back(x.rotation(r, c));
    for (int r = 0; r < 3; ++r) xv.push_back(x.origin[r]);
    write_list(xv);
    out << " inertia=";
    write_list(upper_triangle(model.inertias[i]));
    out << "\n";
  }
  return out.str();
}

namespace {

SpatialInertia random_spd_inertia(Rng& rng) {
  SpatialInertia m = SpatialInertia::Zero();
  for (int attempt = 0; attempt < 64; ++attempt) {
    Mat6 a;
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 6; ++c) a(r, c) = rng.uniform();
    m = 0.5 * (a + a.transpose()) + 0.1 * Mat6::Identity();
    Eigen::SelfAdjointEigenSolver<Mat6> eig(m);
    if (eig.eigenvalues().minCoeff() > 0.0) return m;
  }
  // Shift the last sample onto the SPD cone.
  Eigen::SelfAdjointEigenSolver<Mat6> eig(m);
  return m + (std::abs(eig.eigenvalues().minCoeff()) + 0.1) * Mat6::Identity();
}

const Vec3 kAxes[3] = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};

}  // namespace

MultibodyModel build_test_system() {
  // Topology: a branch at the base (children of body 0: 1 and 2) and a branch
  // at a child link (children of body 1: 3 and 4).
  struct Row {
    int parent;
    JointKind kind;
    int axis;
  };
  const Row rows[9] = {
      {0, JointKind::Revolute, 0}, {0, JointKind::Prismatic, 1}, {1, JointKind::Helical, 2},
      {1, JointKind::Revolute, 1}, {2, JointKind::Prismatic, 2}, {3, JointKind::Helical, 0},
      {4, JointKind::Revolute, 2}, {5, JointKind::Prismatic, 0}, {6, JointKind::Helical, 1},
  };

  Rng rng(0x6e0b5u);
  MultibodyModel model;
  model.n_bodies = 9;
  model.inertias.push_back(random_spd_inertia(rng));
  for (const Row& row : rows) {
    model.parent.push_back(row.parent);
    model.joints.push_back({row.kind, kAxes[row.axis], 0.1});
    model.fixed_transforms.push_back(se3_exp(rng.uniform_vec6()));
    model.inertias.push_back(random_spd_inertia(rng));
  }
  model.validate();
  return model;
}

MultibodyModel random_model(std::uint64_t seed, int n_bodies) {
  Rng rng(seed);
  MultibodyModel model;
  model.n_bodies = n_bodies;
  model.inertias.push_back(random_spd_inertia(rng));
  for (int i = 1; i <= n_bodies; ++i) {
    const int parent = static_cast<int>(rng.uniform() * i);
    const auto kind = static_cast<JointKind>(static_cast<int>(rng.uniform() * 3.0));
    const Vec3 axis = kAxes[static_cast<int>(rng.uniform() * 3.0)];
    model.parent.push_back(std::min(parent, i - 1));
    model.joints.push_back({kind, axis, 0.1});
    model.fixed_transforms.push_back(se3_exp(rng.uniform_vec6()));
    model.inertias.push_back(random_spd_inertia(rng));
  }
  model.validate();
  return model;
}

SystemState random_state(std::uint64_t seed, const MultibodyModel& model) {
  Rng rng(seed);
  SystemState state;
  state.base_pose = se3_exp(rng.uniform_vec6());
  state.joint_pos = rng.uniform_vecx(model.n_joints());
  state.base_twist = MotionVector::FromVector(rng.uniform_vec6());
  state.joint_vel = rng.uniform_vecx(model.n_joints());
  return state;
}

}  // namespace geolin
