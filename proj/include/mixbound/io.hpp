#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mixbound/experiments.hpp"
#include "mixbound/sequence.hpp"

namespace mixbound {

// Fixed-format double used in every artifact so reruns are byte-identical.
inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Artifacts are written to a temp file and renamed into place.
inline void atomic_write_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// Sequence CSV, header: t,state,x0..xd,y
inline std::string sequence_csv(const LabeledSequence& s) {
  std::string out = "t,state";
  const std::size_t d = s.inputs.empty() ? 0 : s.inputs[0].size();
  for (std::size_t i = 0; i < d; ++i) out += ",x" + std::to_string(i);
  out += ",y\n";
  for (long t = 0; t < s.size(); ++t) {
    out += std::to_string(t + 1) + "," +
           std::to_string(s.hidden_states[static_cast<std::size_t>(t)]);
    for (double xi : s.inputs[static_cast<std::size_t>(t)]) out += "," + fmt(xi);
    out += "," + fmt(s.labels[static_cast<std::size_t>(t)]) + "\n";
  }
  return out;
}

// Dual coefficient CSV, header: i,alpha_i
inline std::string dual_coefficients_csv(const TrainedModel& model) {
  std::string out = "i,alpha_i\n";
  for (std::size_t i = 0; i < model.dual_coefficients.size(); ++i)
    out += std::to_string(i + 1) + "," + fmt(model.dual_coefficients[i]) + "\n";
  return out;
}

// Per-trial rows, header: trial,m,mode,delta,R_hat,R_est,gap,bound,violated
inline std::string trials_csv(const SuiteResult& suite, TestMode mode) {
  std::string out = "trial,m,mode,delta,R_hat,R_est,gap,bound,violated\n";
  const std::string mode_name = to_string(mode);
  for (const TrialResult& t : suite.trials) {
    for (const auto& [d, bound] : t.bound) {
      out += std::to_string(t.trial) + "," + std::to_string(t.m) + "," + mode_name + "," +
             fmt(d) + "," + fmt(t.r_hat) + "," + fmt(t.r_est) + "," + fmt(t.gap) + "," +
             fmt(bound) + "," + (t.violated.at(d) ? "1" : "0") + "\n";
    }
  }
  return out;
}

}  // namespace mixbound
