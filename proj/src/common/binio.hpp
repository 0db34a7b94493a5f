#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

// Little-endian primitive readers/writers shared by every binary file format.
namespace lift::binio {

void write_u8(std::ostream& out, std::uint8_t v);
void write_u32(std::ostream& out, std::uint32_t v);
void write_u64(std::ostream& out, std::uint64_t v);
void write_f64(std::ostream& out, double v);
void write_magic(std::ostream& out, const char (&magic)[5]);
void write_string(std::ostream& out, const std::string& s);  // u32 length + bytes

std::uint8_t read_u8(std::istream& in);
std::uint32_t read_u32(std::istream& in);
std::uint64_t read_u64(std::istream& in);
double read_f64(std::istream& in);
void expect_magic(std::istream& in, const char (&magic)[5]);
std::string read_string(std::istream& in);

}  // namespace lift::binio
