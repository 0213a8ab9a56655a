// Shared test helpers: corpus access, brute-force oracles, random
// generators and the randomized property suites.
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "minimaple/ast.hpp"
#include "minimaple/types.hpp"
#include "minimaple/value.hpp"

namespace mmtest {

using minimaple::BigInt;
using minimaple::Program;
using minimaple::Type;
using minimaple::TypeEnv;

std::string corpus_path(const std::string &name);
std::string read_file(const std::string &path);
std::vector<std::string> corpus_files();

// Parses a corpus file; throws std::runtime_error on syntax errors.
Program load_corpus(const std::string &name);

// ---------------------------------------------------------------------------
// Oracles written independently of the interpreter.

using ProdItem = std::variant<long long, double>;

struct ProdOracle {
  BigInt integers = 1;
  double floats = 1.0;
  long long status = -1; // 1-based index of the stopping element, or -1
};

// Walks the list like Listing 2: stops at an integer 0 or a float below 0.5.
ProdOracle brute_force_prod(const std::vector<ProdItem> &items);

// s after running `s := s + i; i := i + 1` while i <= n, starting at i=1, s=0.
BigInt brute_force_sum(long long n);

BigInt brute_force_fac(long long n);

// ---------------------------------------------------------------------------
// Generators

Type random_type(std::mt19937 &rng, int depth);
TypeEnv random_env(std::mt19937 &rng, int depth);

struct ProgramOptions {
  int commands = 6;
  int depth = 2;
  bool errors = false; // may emit `error "boom";`
};

// A random top-level program, one top-level command per line. It always
// starts by binding a, b and c.
std::string random_program(std::mt19937 &rng, const ProgramOptions &opts = {});

// ---------------------------------------------------------------------------
// Property suites

struct PropertyReport {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::string firstFailure;

  bool ok() const { return failures == 0 && cases > 0; }
};

PropertyReport prop_subtype_laws(std::uint32_t seed, int cases);
PropertyReport prop_super_type_upper_bound(std::uint32_t seed, int cases);
PropertyReport prop_union_normalization(std::uint32_t seed, int cases);
PropertyReport prop_combine_specialize(std::uint32_t seed, int cases);
PropertyReport prop_parser_round_trip(std::uint32_t seed, int cases);
PropertyReport prop_branch_merge(std::uint32_t seed, int cases);
PropertyReport prop_loop_fixed_point(std::uint32_t seed, int cases);
PropertyReport prop_error_absorption(std::uint32_t seed, int cases);

std::vector<PropertyReport> all_properties(std::uint32_t seed = 20121, int cases = 1000);

} // namespace mmtest
