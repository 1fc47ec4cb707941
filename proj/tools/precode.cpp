// Command-line front end: error-rate sweeps, search-complexity sweeps, and a
// self-verification suite. All experiment outputs are CSV files whose header
// carries the resolved run manifest; reruns with identical flags produce
// byte-identical files apart from the timestamp line.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "precode/errors.hpp"
#include "precode/precoders.hpp"
#include "precode/simulate.hpp"
#include "precode/version.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitVerification = 3;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

// Grids accept "start:stop" (step 1), "start:step:stop", comma lists, and
// single values.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(std::stod(item));
    double start = 0, step = 1, stop = 0;
    if (parts.size() == 2) {
      start = parts[0];
      stop = parts[1];
    } else if (parts.size() == 3) {
      start = parts[0];
      step = parts[1];
      stop = parts[2];
    } else {
      throw CLI::ValidationError("grid", "expected start:stop or start:step:stop");
    }
    if (step <= 0) throw CLI::ValidationError("grid", "step must be positive");
    for (double v = start; v <= stop + 1e-9; v += step) out.push_back(v);
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) out.push_back(std::stod(item));
    }
  }
  if (out.empty()) throw CLI::ValidationError("grid", "empty grid");
  return out;
}

std::vector<int> parse_int_grid(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_grid(text)) out.push_back(static_cast<int>(std::llround(v)));
  return out;
}

std::uint64_t resolve_seed(const CLI::Option* seed_opt, std::uint64_t flag_value) {
  if (seed_opt->count() > 0) return flag_value;
  if (const char* env = std::getenv("PRECODE_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return flag_value;
}

std::string timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

json manifest_base(const std::string& command, const precode::SweepConfig& cfg) {
  json precoders = json::array();
  for (auto p : cfg.precoders) precoders.push_back(precode::to_string(p));
  return json{
      {"tool", "precode"},
      {"version", precode::kVersion},
      {"command", command},
      {"users", cfg.users},
      {"antennas", cfg.antennas},
      {"alpha_s", cfg.alpha_s},
      {"alpha_x", cfg.alpha_x},
      {"snr_db", cfg.snr_grid_db},
      {"n_channels", cfg.n_channels},
      {"n_symbol_vectors", cfg.n_symbol_vectors},
      {"precoders", precoders},
      {"master_seed", cfg.master_seed},
      {"threads", cfg.threads},
      {"exhaustive_budget", cfg.exhaustive_budget},
      {"tolerances",
       {{"lp_pivot", 1e-10},
        {"lp_feasibility", 1e-8},
        {"lp_objective", 1e-9},
        {"prune_slack", cfg.prune_tol}}},
  };
}

void write_header(std::ostream& os, const json& manifest) {
  os << "# manifest: " << manifest.dump() << "\n";
  os << "# generated_at: " << timestamp_utc() << "\n";
}

std::string join_ints(const std::vector<int>& v, char sep = '-') {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out.push_back(sep);
    out += std::to_string(v[i]);
  }
  return out;
}

int run_ber(precode::SweepConfig cfg, const std::string& out_path) {
  const precode::BerSweepResult result = precode::run_ber_sweep(cfg);

  std::string path = out_path;
  if (path.empty()) {
    path = "ber_K" + std::to_string(cfg.users) + "_M" + join_ints(cfg.antennas) + "_as" +
           std::to_string(cfg.alpha_s) + "_ax" + std::to_string(cfg.alpha_x) + "_seed" +
           std::to_string(cfg.master_seed) + ".csv";
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    std::cerr << "error: cannot open output file " << path << "\n";
    return kExitRuntime;
  }
  json manifest = manifest_base("ber", cfg);
  manifest["instances_excluded"] = result.instances_excluded;
  manifest["zero_receive_events"] = result.zero_receive_events;
  write_header(os, manifest);
  os << "precoder,K,M,alpha_s,alpha_x,snr_db,ber,ser,bit_errors,bits_total,n_channels,seed\n";
  for (const auto& pt : result.points) {
    os << precode::to_string(pt.precoder) << ',' << cfg.users << ',' << pt.antennas << ','
       << cfg.alpha_s << ',' << cfg.alpha_x << ',' << format_double(pt.snr_db) << ','
       << format_double(pt.ber) << ',' << format_double(pt.ser) << ',' << pt.bit_errors << ','
       << pt.bits_total << ',' << cfg.n_channels << ',' << cfg.master_seed << "\n";
  }
  std::cerr << "wrote " << result.points.size() << " rows to " << path;
  if (result.instances_excluded > 0) {
    std::cerr << " (" << result.instances_excluded << " instances excluded)";
  }
  std::cerr << "\n";
  return kExitOk;
}

int run_complexity(precode::SweepConfig cfg, const std::string& out_path) {
  const std::vector<precode::ComplexitySample> samples = precode::run_complexity_sweep(cfg);

  std::string path = out_path;
  if (path.empty()) {
    path = "complexity_K" + std::to_string(cfg.users) + "_M" + join_ints(cfg.antennas) + "_ax" +
           std::to_string(cfg.alpha_x) + "_seed" + std::to_string(cfg.master_seed) + ".csv";
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    std::cerr << "error: cannot open output file " << path << "\n";
    return kExitRuntime;
  }
  write_header(os, manifest_base("complexity", cfg));
  os << "M,alpha_x,mean_branches,std_branches,exhaustive_count,n_channels,seed\n";
  for (const auto& s : samples) {
    os << s.antennas << ',' << s.alpha_x << ',' << format_double(s.mean_branches) << ','
       << format_double(s.std_branches) << ',' << format_double(s.exhaustive_count) << ','
       << s.n_channels << ',' << cfg.master_seed << "\n";
  }
  std::cerr << "wrote " << samples.size() << " rows to " << path << "\n";
  return kExitOk;
}

struct VerifyTally {
  long long optimal_ok = 0;
  long long sandwich_ok = 0;
  long long zf_ok = 0;
  long long total = 0;
};

int run_verify(int users, const std::vector<int>& antennas, const std::vector<int>& alpha_s_list,
               const std::vector<int>& alpha_x_list, int instances, std::uint64_t seed,
               double prune_tol, long long budget, int threads) {
  using namespace precode;
  if (threads <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = hw == 0 ? 1 : static_cast<int>(hw);
  }

  bool all_pass = true;
  std::printf("%-28s %10s %10s %10s %8s\n", "config", "optimal", "sandwich", "zf<=opt", "status");
  for (int M : antennas) {
    for (int as : alpha_s_list) {
      for (int ax : alpha_x_list) {
        SystemConfig sys;
        sys.users = users;
        sys.antennas = M;
        sys.alpha_s = as;
        sys.alpha_x = ax;
        sys.validate();
        if (std::pow(static_cast<double>(ax), M) > static_cast<double>(budget)) {
          std::printf("K=%d M=%d as=%d ax=%d: skipped, exhaustive budget exceeded\n", users, M, as, ax);
          continue;
        }

        VerifyTally tally;
        std::mutex tally_mutex;
        std::atomic<int> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;

        auto work = [&]() {
          try {
            VerifyTally local;
            while (true) {
              const int i = next.fetch_add(1);
              if (i >= instances) break;
              const std::uint64_t id =
                  (static_cast<std::uint64_t>(M) << 48) ^ (static_cast<std::uint64_t>(as) << 40) ^
                  (static_cast<std::uint64_t>(ax) << 32) ^ static_cast<std::uint64_t>(i);
              RandomStream rng = RandomStream::substream(seed, id);
              const Eigen::MatrixXcd channel = draw_channel(users, M, rng);
              const PskAlphabet data = sys.data_alphabet();
              std::vector<int> s_idx(static_cast<std::size_t>(users));
              for (int k = 0; k < users; ++k) s_idx[static_cast<std::size_t>(k)] = rng.uniform_index(as);
              const Eigen::VectorXcd s = symbols_from_indices(s_idx, data);

              const PrecodeResult oracle = exhaustive(channel, s, sys, budget);
              BnbOptions opt;
              opt.prune_tol = prune_tol;
              const PrecodeResult bnb = bnb_optimal(channel, s, sys, opt);
              const RelaxationPair relax = mddt_mapped(channel, s, sys);
              const PrecodeResult zf = zf_phase_quantized(channel, s, sys);

              ++local.total;
              if (std::abs(bnb.epsilon - oracle.epsilon) <= 1e-9 && bnb.indices == oracle.indices) {
                ++local.optimal_ok;
              }
              if (relax.continuous.epsilon >= oracle.epsilon - 1e-9 &&
                  oracle.epsilon >= relax.mapped.epsilon - 1e-9) {
                ++local.sandwich_ok;
              }
              if (zf.epsilon <= bnb.epsilon + 1e-9) ++local.zf_ok;
            }
            std::lock_guard<std::mutex> lock(tally_mutex);
            tally.total += local.total;
            tally.optimal_ok += local.optimal_ok;
            tally.sandwich_ok += local.sandwich_ok;
            tally.zf_ok += local.zf_ok;
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        };
        if (threads <= 1) {
          work();
        } else {
          std::vector<std::thread> pool;
          for (int t = 0; t < threads; ++t) pool.emplace_back(work);
          for (auto& th : pool) th.join();
        }
        if (error) std::rethrow_exception(error);

        const bool pass = tally.optimal_ok == tally.total && tally.sandwich_ok == tally.total &&
                          tally.zf_ok == tally.total;
        all_pass = all_pass && pass;
        char config[64];
        std::snprintf(config, sizeof(config), "K=%d M=%d as=%d ax=%d", users, M, as, ax);
        std::printf("%-28s %6lld/%-3lld %6lld/%-3lld %6lld/%-3lld %8s\n", config, tally.optimal_ok,
                    tally.total, tally.sandwich_ok, tally.total, tally.zf_ok, tally.total,
                    pass ? "PASS" : "FAIL");
      }
    }
  }
  return all_pass ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constant-envelope phase-quantized downlink precoding experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", precode::kVersion);

  // Shared flag storage; each subcommand registers the subset it uses.
  int users = 2;
  std::string antennas_text = "6";
  int alpha_s = 8;
  int alpha_x = 8;
  std::string snr_text;
  int channels = 1000;
  int symbols_per_channel = 100;
  std::string precoders_text = "bnb,mddt_mapped,continuous_mmddt,zf_quantized";
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out_path;
  double prune_tol = 1e-9;
  long long budget = 10'000'000;
  int verify_instances = 200;
  std::string verify_alpha_s_text = "4,8";
  std::string verify_alpha_x_text = "3,4,8";

  CLI::App* ber = app.add_subcommand("ber", "Monte Carlo error-rate sweep over an SNR grid");
  CLI::Option* ber_seed = ber->add_option("--seed", seed, "Master seed (env PRECODE_SEED as fallback)");
  ber->add_option("--K", users, "Number of users")->check(CLI::PositiveNumber);
  ber->add_option("--M", antennas_text, "Transmit antennas (value, list, or a:b range)");
  ber->add_option("--alpha-s", alpha_s, "Data alphabet size")->check(CLI::Range(2, 1 << 20));
  ber->add_option("--alpha-x", alpha_x, "Transmit alphabet size")->check(CLI::Range(2, 1 << 20));
  ber->add_option("--snr", snr_text, "SNR grid in dB: value, list, or start:step:stop")->required();
  ber->add_option("--channels", channels, "Channel realizations")->check(CLI::PositiveNumber);
  ber->add_option("--symbols-per-channel", symbols_per_channel, "Symbol vectors per channel")
      ->check(CLI::PositiveNumber);
  ber->add_option("--precoders", precoders_text,
                  "Comma list of bnb,mddt_mapped,continuous_mmddt,zf_quantized,exhaustive");
  ber->add_option("--threads", threads, "Worker threads (0 = hardware)");
  ber->add_option("--out", out_path, "Output CSV path (default ber_<tag>.csv)");
  ber->add_option("--prune-tol", prune_tol, "Branch-and-bound prune slack");
  ber->add_option("--budget", budget, "Exhaustive enumeration budget");

  CLI::App* cpx = app.add_subcommand("complexity", "Average branch-and-bound search size versus M");
  CLI::Option* cpx_seed = cpx->add_option("--seed", seed, "Master seed (env PRECODE_SEED as fallback)");
  cpx->add_option("--K", users, "Number of users")->check(CLI::PositiveNumber);
  cpx->add_option("--M", antennas_text, "Transmit antennas (value, list, or a:b range)");
  int cpx_alpha_s = 4;
  cpx->add_option("--alpha-s", cpx_alpha_s, "Data alphabet size")->check(CLI::Range(2, 1 << 20));
  cpx->add_option("--alpha-x", alpha_x, "Transmit alphabet size")->check(CLI::Range(2, 1 << 20));
  cpx->add_option("--channels", channels, "Channel realizations")->check(CLI::PositiveNumber);
  cpx->add_option("--threads", threads, "Worker threads (0 = hardware)");
  cpx->add_option("--out", out_path, "Output CSV path (default complexity_<tag>.csv)");
  cpx->add_option("--prune-tol", prune_tol, "Branch-and-bound prune slack");

  CLI::App* verify = app.add_subcommand("verify", "Oracle-equivalence and bound-sandwich checks");
  CLI::Option* verify_seed =
      verify->add_option("--seed", seed, "Master seed (env PRECODE_SEED as fallback)");
  verify->add_option("--K", users, "Number of users")->check(CLI::PositiveNumber);
  std::string verify_antennas_text = "4";
  verify->add_option("--M", verify_antennas_text, "Antenna counts (value, list, or a:b range)");
  verify->add_option("--alpha-s", verify_alpha_s_text, "Data alphabet sizes (comma list)");
  verify->add_option("--alpha-x", verify_alpha_x_text, "Transmit alphabet sizes (comma list)");
  verify->add_option("--instances", verify_instances, "Random instances per configuration")
      ->check(CLI::PositiveNumber);
  verify->add_option("--threads", threads, "Worker threads (0 = hardware)");
  verify->add_option("--prune-tol", prune_tol,
                     "Branch-and-bound prune slack (negative values deliberately break pruning)");
  verify->add_option("--budget", budget, "Exhaustive enumeration budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (ber->parsed() || cpx->parsed()) {
      precode::SweepConfig cfg;
      cfg.users = users;
      cfg.antennas = parse_int_grid(antennas_text);
      cfg.alpha_x = alpha_x;
      cfg.n_channels = channels;
      cfg.threads = threads;
      cfg.prune_tol = prune_tol;
      cfg.exhaustive_budget = budget;
      if (ber->parsed()) {
        cfg.alpha_s = alpha_s;
        cfg.master_seed = resolve_seed(ber_seed, seed);
        cfg.snr_grid_db = parse_grid(snr_text);
        cfg.n_symbol_vectors = symbols_per_channel;
        cfg.precoders.clear();
        std::stringstream ss(precoders_text);
        std::string name;
        while (std::getline(ss, name, ',')) {
          if (name.empty()) continue;
          const auto p = precode::precoder_from_string(name);
          if (!p) {
            std::cerr << "error: unknown precoder '" << name << "'\n";
            return kExitUsage;
          }
          cfg.precoders.push_back(*p);
        }
        cfg.validate_for_ber();
        return run_ber(cfg, out_path);
      }
      cfg.alpha_s = cpx_alpha_s;
      cfg.master_seed = resolve_seed(cpx_seed, seed);
      cfg.precoders = {precode::Precoder::kBnb};
      cfg.validate_for_complexity();
      return run_complexity(cfg, out_path);
    }
    if (verify->parsed()) {
      const std::uint64_t resolved = resolve_seed(verify_seed, seed);
      std::vector<int> as_list = parse_int_grid(verify_alpha_s_text);
      std::vector<int> ax_list = parse_int_grid(verify_alpha_x_text);
      return run_verify(users, parse_int_grid(verify_antennas_text), as_list, ax_list,
                        verify_instances, resolved, prune_tol, budget, threads);
    }
  } catch (const precode::ContractViolation& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
