#include "symcap/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace symcap {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Json parse_json_text(const std::string& text) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return Json();
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t upto = std::min(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::SpecParseError,
                "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::SpecParseError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str());
}

Json vector_to_json(const VecRef& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

namespace {

double number(const Json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "Infinity") return std::numeric_limits<double>::infinity();
  }
  throw Error(ErrorCode::SpecParseError, what + " must be a number");
}

Mat columns_from_rows(const Json& rows, Eigen::Index dim, const std::string& what) {
  require(rows.is_array() && !rows.empty(), ErrorCode::SpecParseError, what + " must be a non-empty array");
  Mat out(dim, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const Vec v = vector_from_json(rows[k]);
    require(v.size() == dim, ErrorCode::SpecParseError, what + " entry has wrong dimension");
    out.col(static_cast<Eigen::Index>(k)) = v;
  }
  return out;
}

Json columns_to_rows(const Mat& cols) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < cols.cols(); ++k) out.push_back(vector_to_json(cols.col(k)));
  return out;
}

}  // namespace

Vec vector_from_json(const Json& j) {
  require(j.is_array(), ErrorCode::SpecParseError, "expected an array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], "vector entry");
  return v;
}

ConvexBody body_from_json(const Json& spec) {
  require(spec.is_object(), ErrorCode::SpecParseError, "body spec must be an object");
  require(spec.contains("kind") && spec["kind"].is_string(), ErrorCode::SpecParseError, "body spec needs \"kind\"");
  require(spec.contains("dim") && spec["dim"].is_number_integer(), ErrorCode::SpecParseError,
          "body spec needs integer \"dim\"");
  const std::string kind = spec["kind"].get<std::string>();
  const auto dim = spec["dim"].get<Eigen::Index>();
  require(dim >= 1, ErrorCode::SpecParseError, "dim must be positive");
  const Json params = spec.value("params", Json::object());

  if (kind == "ellipsoid") {
    std::optional<Vec> center;
    if (params.contains("center")) center = vector_from_json(params["center"]);
    Mat shape;
    if (params.contains("matrix")) {
      const Json& m = params["matrix"];
      require(m.is_array() && !m.empty(), ErrorCode::SpecParseError, "matrix must be an array");
      shape.resize(dim, dim);
      if (m[0].is_array()) {
        require(static_cast<Eigen::Index>(m.size()) == dim, ErrorCode::SpecParseError, "matrix has wrong row count");
        for (Eigen::Index r = 0; r < dim; ++r) {
          const Vec row = vector_from_json(m[static_cast<std::size_t>(r)]);
          require(row.size() == dim, ErrorCode::SpecParseError, "matrix row has wrong length");
          shape.row(r) = row.transpose();
        }
      } else {
        const Vec flat = vector_from_json(m);
        require(flat.size() == dim * dim, ErrorCode::SpecParseError, "flat matrix needs dim*dim entries");
        for (Eigen::Index r = 0; r < dim; ++r)
          for (Eigen::Index c = 0; c < dim; ++c) shape(r, c) = flat(r * dim + c);
      }
    } else if (params.contains("axes")) {
      const Vec axes = vector_from_json(params["axes"]);
      require(axes.size() == dim, ErrorCode::SpecParseError, "axes must have dim entries");
      require((axes.array() > 0).all(), ErrorCode::NonConvexParameters, "ellipsoid axes must be positive");
      shape = axes.cwiseAbs2().cwiseInverse().asDiagonal();
    } else if (params.contains("radii")) {
      const Vec radii = vector_from_json(params["radii"]);
      require(2 * radii.size() == dim, ErrorCode::SpecParseError, "radii must have dim/2 entries");
      require((radii.array() > 0).all(), ErrorCode::NonConvexParameters, "ellipsoid radii must be positive");
      Vec axes(dim);
      axes << radii, radii;
      shape = axes.cwiseAbs2().cwiseInverse().asDiagonal();
    } else {
      throw Error(ErrorCode::SpecParseError, "ellipsoid needs \"matrix\", \"axes\" or \"radii\"");
    }
    return ConvexBody::ellipsoid(shape, center);
  }
  if (kind == "lp") {
    require(params.contains("p"), ErrorCode::SpecParseError, "lp body needs \"p\"");
    std::optional<Vec> weights;
    if (params.contains("weights")) weights = vector_from_json(params["weights"]);
    return ConvexBody::lp_ball(dim, number(params["p"], "p"), weights);
  }
  if (kind == "polytope_v") {
    require(params.contains("vertices"), ErrorCode::SpecParseError, "polytope_v needs \"vertices\"");
    return ConvexBody::polytope_v(columns_from_rows(params["vertices"], dim, "vertices"));
  }
  if (kind == "polytope_h") {
    require(params.contains("normals") && params.contains("offsets"), ErrorCode::SpecParseError,
            "polytope_h needs \"normals\" and \"offsets\"");
    return ConvexBody::polytope_h(columns_from_rows(params["normals"], dim, "normals"),
                                  vector_from_json(params["offsets"]));
  }
  throw Error(ErrorCode::SpecParseError, "unknown body kind \"" + kind + "\"");
}

Json body_to_json(const ConvexBody& body) {
  Json out;
  out["kind"] = to_string(body.kind());
  out["dim"] = body.dim();
  Json params = Json::object();
  if (const auto* e = std::get_if<Ellipsoid>(&body.data())) {
    Json m = Json::array();
    for (Eigen::Index r = 0; r < e->shape.rows(); ++r) m.push_back(vector_to_json(e->shape.row(r).transpose()));
    params["matrix"] = m;
    if (e->center.norm() > 0) params["center"] = vector_to_json(e->center);
  } else if (const auto* b = std::get_if<LpBall>(&body.data())) {
    params["p"] = std::isinf(b->p) ? Json("inf") : Json(b->p);
    params["weights"] = vector_to_json(b->weights);
  } else if (const auto* v = std::get_if<PolytopeV>(&body.data())) {
    params["vertices"] = columns_to_rows(v->vertices);
  } else if (const auto* h = std::get_if<PolytopeH>(&body.data())) {
    params["normals"] = columns_to_rows(h->normals);
    params["offsets"] = vector_to_json(h->offsets);
  }
  out["params"] = params;
  return out;
}

DiscreteLoop loop_from_json(const Json& spec) {
  require(spec.is_object() && spec.contains("vertices"), ErrorCode::SpecParseError, "loop spec needs \"vertices\"");
  const Json& verts = spec["vertices"];
  require(verts.is_array() && !verts.empty(), ErrorCode::SpecParseError, "loop vertices must be an array");
  const Eigen::Index dim = spec.contains("dim") ? spec["dim"].get<Eigen::Index>()
                                                : static_cast<Eigen::Index>(verts[0].size());
  return DiscreteLoop(columns_from_rows(verts, dim, "loop vertices"));
}

Json loop_to_json(const DiscreteLoop& loop) {
  Json out;
  out["dim"] = loop.dim();
  out["vertices"] = columns_to_rows(loop.vertices());
  return out;
}

}  // namespace symcap
