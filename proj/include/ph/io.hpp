#pragma once

#include <Eigen/Dense>
#include <string>

#include "ph/diagram.hpp"
#include "ph/measure.hpp"
#include "ph/point_cloud.hpp"

namespace ph {

// 17 significant digits: doubles survive a text round trip exactly
std::string format_double(double v);

// one point per line, comma-separated coordinates, '#' starts a comment line
PointCloud load_points_csv(const std::string& path);
void save_points_csv(const PointCloud& X, const std::string& path);

// magic "PCF1", little-endian u64 count and dimension, then count*dim f64
PointCloud load_points_binary(const std::string& path);
void save_points_binary(const PointCloud& X, const std::string& path);

// N lines of N comma-separated floats, validated square and symmetric
FiniteMetricSpace load_distance_csv(const std::string& path);
void save_distance_csv(const Eigen::MatrixXd& dist, const std::string& path);

std::string diagram_to_json(const PersistenceDiagram& D);
std::string measure_to_json(const PersistenceMeasure& mu);
PersistenceDiagram diagram_from_json(const std::string& text, const std::string& origin = "<json>");
PersistenceMeasure measure_from_json(const std::string& text, const std::string& origin = "<json>");

PersistenceDiagram load_diagram_json(const std::string& path);
void save_diagram_json(const PersistenceDiagram& D, const std::string& path);
PersistenceMeasure load_measure_json(const std::string& path);
void save_measure_json(const PersistenceMeasure& mu, const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace ph
