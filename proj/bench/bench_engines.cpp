// Times the serial reference engine against the OpenMP engine on generated
// inputs and reports per-iteration throughput plus a bitwise equality check.
#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "nestrank/bimatrix.hpp"
#include "nestrank/metrics.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double Seconds(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

struct Sample {
  double seconds = 0.0;
  std::int64_t iterations = 0;
  nestrank::RunResult result;
};

Sample TimeRun(const nestrank::BinaryBipartiteMatrix& m, nestrank::Algo algo,
               nestrank::ExecMode mode) {
  nestrank::RunOptions opt;
  opt.epsilon = 1e-7;
  opt.gamma = 3.0;
  opt.mode = mode;
  Clock::time_point t0 = Clock::now();
  nestrank::RunResult r = nestrank::run_metric(m, algo, opt);
  Clock::time_point t1 = Clock::now();
  return {Seconds(t0, t1), r.report.iterations, std::move(r)};
}

bool SameScores(const nestrank::RunResult& a, const nestrank::RunResult& b) {
  return a.state.fitness == b.state.fitness && a.state.complexity == b.state.complexity &&
         a.report.iterations == b.report.iterations;
}

const char* AlgoName(nestrank::Algo algo) {
  switch (algo) {
    case nestrank::Algo::kFitnessComplexity: return "fcm";
    case nestrank::Algo::kMinimalExtremal: return "mem";
    case nestrank::Algo::kGeneralizedGamma: return "gamma";
  }
  return "?";
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::int64_t> sizes = {200, 400, 800, 1600};
  if (argc > 1) {
    sizes.clear();
    for (int i = 1; i < argc; ++i) sizes.push_back(std::atoll(argv[i]));
  }

  std::printf("%-6s %-6s %10s %12s %12s %8s %s\n", "algo", "N", "iters",
              "serial_s", "parallel_s", "speedup", "identical");
  for (std::int64_t n : sizes) {
    nestrank::BinaryBipartiteMatrix m = nestrank::generate_model_a(n, 0.5);
    for (nestrank::Algo algo :
         {nestrank::Algo::kFitnessComplexity, nestrank::Algo::kMinimalExtremal, nestrank::Algo::kGeneralizedGamma}) {
      Sample s = TimeRun(m, algo, nestrank::ExecMode::kSerial);
      Sample p = TimeRun(m, algo, nestrank::ExecMode::kParallel);
      bool same = SameScores(s.result, p.result);
      std::printf("%-6s %-6lld %10lld %12.4f %12.4f %8.2f %s\n", AlgoName(algo),
                  static_cast<long long>(n),
                  static_cast<long long>(s.iterations), s.seconds, p.seconds,
                  p.seconds > 0 ? s.seconds / p.seconds : 0.0,
                  same ? "yes" : "NO");
      if (!same) return 1;
    }
  }
  return 0;
}
