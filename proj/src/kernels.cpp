// Copyright 2026 The StereoTrace Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "stereotrace/kernels.hpp"

namespace stereotrace::simd {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return avx2_table() != nullptr && __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::Neon: return neon_table() != nullptr;
  }
  return false;
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon})
    if (isa_supported(isa)) out.push_back(isa);
  return out;
}

const KernelTable& kernels(Isa isa) {
  if (!isa_supported(isa)) throw std::invalid_argument("ISA not supported on this host: " + std::string(to_string(isa)));
  switch (isa) {
    case Isa::Avx2: return *avx2_table();
    case Isa::Neon: return *neon_table();
    case Isa::Scalar: break;
  }
  return *scalar_table();
}

namespace {

const KernelTable& select_kernels() {
  if (const char* forced = std::getenv("STEREOTRACE_ISA")) {
    const std::string_view name(forced);
    for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon})
      if (name == to_string(isa)) return kernels(isa);
    throw std::invalid_argument("unknown STEREOTRACE_ISA value: " + std::string(name));
  }
  const auto isas = available_isas();
  return kernels(isas.back());
}

}  // namespace

const KernelTable& active_kernels() {
  static const KernelTable& table = select_kernels();
  return table;
}

}  // namespace stereotrace::simd
