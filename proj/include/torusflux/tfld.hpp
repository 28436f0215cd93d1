#ifndef TORUSFLUX_TFLD_HPP
#define TORUSFLUX_TFLD_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "torusflux/field.hpp"

namespace torusflux {

// Field container format, version 1:
//   magic   "TFLD"        4 bytes
//   version u16 LE
//   dim     u8
//   n       u32 LE
//   comps   u8
//   data    f64 LE, row-major physical samples (last axis fastest),
//           one component after another.
inline constexpr std::uint16_t kTfldVersion = 1;

std::vector<std::uint8_t> tfld_serialize(const TorusField& f);
TorusField tfld_deserialize(const std::vector<std::uint8_t>& bytes);

void write_tfld(const std::string& path, const TorusField& f);
TorusField read_tfld(const std::string& path);

} // namespace torusflux

#endif
