// vispoints: command-line front end.
//
// Exit codes: 0 success or certificate passes, 1 certified failure,
// 2 capacity or budget exceeded, 64 usage error, 70 internal error.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vispoints/error_analysis.hpp"
#include "vispoints/errors.hpp"
#include "vispoints/parallel.hpp"
#include "vispoints/visibility.hpp"

namespace fs = std::filesystem;
using namespace vispoints;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitCapacity = 2;
constexpr int kExitUsage = 64;
constexpr int kExitInternal = 70;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  unsigned threads = 0;
  std::string cache_dir;
  std::string out;
};

unsigned thread_count(const Config& cfg) { return cfg.threads ? cfg.threads : default_thread_count(); }

// Integer radii are read exactly; anything else goes through a double and is floored.
std::uint64_t parse_radius(unsigned dim, const std::string& text) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  if (auto [p, ec] = std::from_chars(text.data(), end, v); ec == std::errc{} && p == end) return v;
  double d = 0;
  try {
    std::size_t used = 0;
    d = std::stod(text, &used);
    if (used != text.size()) throw UsageError("bad radius: " + text);
  } catch (const std::logic_error&) {
    throw UsageError("bad radius: " + text);
  }
  if (d >= 18446744073709551616.0) throw UsageError("radius too large: " + text);
  return make_query(dim, d).radius;
}

// Writes to --out (or stdout). The file only appears once the whole body is
// rendered, so a failed run never leaves a partial file behind.
void emit(const Config& cfg, const std::string& body) {
  if (cfg.out.empty() || cfg.out == "-") {
    std::cout << body;
    std::cout.flush();
    return;
  }
  const fs::path tmp = cfg.out + ".partial";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string());
    f << body;
    if (!f.flush()) {
      f.close();
      fs::remove(tmp);
      throw std::runtime_error("write failed: " + tmp.string());
    }
  }
  fs::rename(tmp, cfg.out);
}

int cmd_count(const Config& cfg, unsigned dim, const std::string& radius_text, const std::string& method,
              std::uint64_t budget) {
  const std::uint64_t r = parse_radius(dim, radius_text);
  const EnumerationOptions opts{budget, thread_count(cfg)};
  Integer v;
  if (method == "brute") {
    v = brute_force_count({dim, r}, opts);
  } else if (method == "umbral") {
    v = umbral_evaluate(umbral_polynomial(dim), r);
  } else if (method == "orthant") {
    v = count_via_orthants(dim, r, PositiveSource::enumeration, opts);
  } else {
    v = count_via_orthants(dim, r, PositiveSource::differences, opts);
  }
  emit(cfg, v.get_str() + "\n");
  std::cerr << "method: " << method << "\n";
  return 0;
}

int cmd_error(const Config& cfg, unsigned dim, std::uint64_t from, std::uint64_t to, std::uint64_t step) {
  if (from < 1 || from > to) throw UsageError("need 1 <= --from <= --to");
  const auto rows = error_scan(dim, from, to, step, thread_count(cfg));
  std::ostringstream out;
  write_error_csv(out, dim, rows);
  emit(cfg, out.str());
  return 0;
}

int cmd_certify(const Config& cfg, unsigned dim, std::uint64_t cutoff) {
  if (dim != 2 && dim != 3) throw UsageError("certify covers --dim 2 or 3; use negcheck for m >= 4");
  if (cutoff < 6) throw UsageError("--cutoff must be >= 6");
  const auto cert = certify_witness_bound(dim, cutoff);
  emit(cfg, to_json(cert) + "\n");
  return cert.passes ? 0 : kExitFail;
}

int cmd_negcheck(const Config& cfg, unsigned dim, std::uint64_t r_max) {
  if (dim < 4) throw UsageError("negcheck covers --dim >= 4; use certify for 2 and 3");
  const auto rep = large_m_negativity_check(dim, r_max, thread_count(cfg));
  std::ostringstream out;
  out << "m=" << rep.m << "\n"
      << "r_max=" << rep.r_max << "\n"
      << "zeta_condition=" << (rep.zeta_condition ? "true" : "false") << "\n"
      << "checked=" << rep.checked << "\n"
      << "exact_fallbacks=" << rep.exact_fallbacks << "\n"
      << "counterexample=" << (rep.counterexample ? std::to_string(*rep.counterexample) : "none") << "\n"
      << "result=" << (rep.passed() ? "pass" : "fail") << "\n";
  emit(cfg, out.str());
  return rep.passed() ? 0 : kExitFail;
}

int cmd_witness(const Config& cfg, unsigned dim, const std::vector<std::uint64_t>& primes,
                const std::vector<std::uint64_t>& ks, std::uint64_t cap) {
  for (auto k : ks) {
    if (k % 2 == 0) throw UsageError("--k values must be odd, got " + std::to_string(k));
  }
  const auto report = witness_scan(dim, primes, ks, cap, thread_count(cfg));
  std::ostringstream out;
  write_witness_csv(out, report);
  emit(cfg, out.str());
  return 0;
}

int cmd_mobius(const Config& cfg, std::uint64_t limit) {
  fs::path path = cfg.out;
  if (path.empty()) {
    if (cfg.cache_dir.empty()) throw UsageError("mobius needs --out or --cache-dir");
    path = fs::path(cfg.cache_dir) / ("mobius-" + std::to_string(limit) + ".vpmu");
  }
  bool reused = false;
  std::optional<MobiusTable> table;
  if (fs::exists(path)) {
    try {
      auto cached = load_mobius_cache(path);
      if (cached.limit() == limit) {
        table = std::move(cached);
        reused = true;
      }
    } catch (const FormatError&) {
      // unreadable cache: rebuild and overwrite
    }
  }
  if (!table) {
    table = build_mobius_table(limit);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".partial";
    save_mobius_cache(tmp, *table);
    fs::rename(tmp, path);
  }
  std::int64_t mertens = 0;
  std::uint64_t squarefree = 0;
  for (auto v : table->values()) {
    mertens += v;
    squarefree += v != 0;
  }
  std::cout << "limit=" << limit << "\nmertens=" << mertens << "\nsquarefree=" << squarefree << "\n";
  std::cerr << (reused ? "reused " : "wrote ") << path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Visible lattice point counts, error terms and certificates"};
  app.require_subcommand(1);
  app.fallthrough();

  Config cfg;
  app.add_option("--threads", cfg.threads, "Worker threads (overrides VISPOINTS_THREADS)")->check(CLI::PositiveNumber);
  app.add_option("--cache-dir", cfg.cache_dir, "Directory for sieve caches");
  app.add_option("--out", cfg.out, "Output file (default stdout)");

  unsigned dim = 0;
  std::string radius;
  std::string method = "umbral";
  std::uint64_t budget = kDefaultEnumerationBudget;
  auto* count = app.add_subcommand("count", "Print V_m(r)");
  count->add_option("--dim", dim, "Dimension m")->required()->check(CLI::PositiveNumber);
  count->add_option("--radius", radius, "Radius r >= 0")->required();
  count->add_option("--method", method, "Counting route")
      ->check(CLI::IsMember({"brute", "umbral", "orthant", "diff"}));
  count->add_option("--budget", budget, "Point budget for enumeration")->check(CLI::PositiveNumber);

  std::uint64_t from = 0, to = 0, step = 1;
  auto* error = app.add_subcommand("error", "CSV of E_m(r) over a range of radii");
  error->add_option("--dim", dim, "Dimension m >= 2")->required()->check(CLI::Range(2u, 64u));
  error->add_option("--from", from, "First radius")->required();
  error->add_option("--to", to, "Last radius")->required();
  error->add_option("--step", step, "Radius step")->check(CLI::PositiveNumber);

  std::uint64_t cutoff = 100;
  auto* certify = app.add_subcommand("certify", "Exact certificate that the witness sum stays below -1/20");
  certify->add_option("--dim", dim, "Dimension, 2 or 3")->required();
  certify->add_option("--cutoff", cutoff, "Prime cutoff D");

  std::uint64_t r_max = 0;
  auto* negcheck = app.add_subcommand("negcheck", "Sign check of the fractional sum for m >= 4");
  negcheck->add_option("--dim", dim, "Dimension m >= 4")->required();
  negcheck->add_option("--r-max", r_max, "Largest radius")->required();

  std::vector<std::uint64_t> primes{3, 5, 7, 11, 13};
  std::vector<std::uint64_t> ks{1};
  std::uint64_t cap = 1'000'000;
  auto* witness = app.add_subcommand("witness", "CSV of witness radii k * prod(primes)");
  witness->add_option("--dim", dim, "Dimension m >= 2")->required()->check(CLI::Range(2u, 64u));
  witness->add_option("--primes", primes, "Odd primes")->delimiter(',');
  witness->add_option("--k", ks, "Odd multipliers coprime to the primes")->delimiter(',');
  witness->add_option("--cap", cap, "Largest radius to evaluate");

  std::uint64_t limit = 0;
  auto* mobius = app.add_subcommand("mobius", "Write (or reuse) a sieve cache file");
  mobius->add_option("--limit", limit, "Sieve limit")->required()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*count) return cmd_count(cfg, dim, radius, method, budget);
    if (*error) return cmd_error(cfg, dim, from, to, step);
    if (*certify) return cmd_certify(cfg, dim, cutoff);
    if (*negcheck) return cmd_negcheck(cfg, dim, r_max);
    if (*witness) return cmd_witness(cfg, dim, primes, ks, cap);
    if (*mobius) return cmd_mobius(cfg, limit);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << " (raise --budget)\n";
    return kExitCapacity;
  } catch (const CapacityError& e) {
    std::cerr << "capacity exceeded: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const std::bad_alloc&) {
    std::cerr << "capacity exceeded: out of memory\n";
    return kExitCapacity;
  } catch (const FormatError& e) {
    std::cerr << "bad input file: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
