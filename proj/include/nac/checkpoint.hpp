#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>

#include "nac/q_model.hpp"

namespace nac {

// Checkpoint layout:
//   "NACQ1\n"
//   <descriptor line>\n     e.g. "tabular states=18 actions=4"
//                                "mlp widths=28,64,64,9 activation=relu frame_stack=4"
//   parameters as little-endian IEEE-754 binary64, layer order
void write_checkpoint(const QModel& model, std::ostream& out);
void save_checkpoint(const QModel& model, const std::filesystem::path& path);

// Throws FormatError on a bad magic, descriptor, or truncated parameter block.
std::unique_ptr<QModel> read_checkpoint(std::istream& in);
std::unique_ptr<QModel> load_checkpoint(const std::filesystem::path& path);

// Parses a descriptor line into an all-zero model of that architecture.
std::unique_ptr<QModel> model_from_descriptor(const std::string& descriptor);

}  // namespace nac
