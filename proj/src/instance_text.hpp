#pragma once

// Shared "key = value" handling of instance fields, used by both the
// instance spec and the experiment spec.

#include <ostream>

#include <boost/property_tree/ptree.hpp>

#include "gracezo/benchmarks.hpp"

namespace gracezo::detail {

std::string format_double(double value);

/// Writes every field except seed and stream.
void write_instance_fields(std::ostream& out, const InstanceSpec& spec, const char* family_key);

/// Reads the fields written by write_instance_fields. Throws ParseError.
InstanceSpec read_instance_fields(const boost::property_tree::ptree& tree, const char* family_key);

}  // namespace gracezo::detail
