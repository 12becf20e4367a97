#ifndef PUNWRAP_FIELD_IO_HPP
#define PUNWRAP_FIELD_IO_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "punwrap/phase_model.hpp"

namespace punwrap {

struct FieldIoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Binary field format: 16-byte header (magic "PHWR", version u16, rows u32,
/// cols u32, flags u16), row-major f32 psi values, optional row-major i32
/// truth cycle counts (flag bit 0), JSON metadata trailer. Little-endian.
void write_field(std::ostream& os, const WrappedField& f);
WrappedField read_field(std::istream& is);

/// Atomic file variants (write-temp-then-rename).
void write_field_file(const std::string& path, const WrappedField& f);
WrappedField read_field_file(const std::string& path);

}  // namespace punwrap

#endif  // PUNWRAP_FIELD_IO_HPP
