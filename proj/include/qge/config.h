/* Copyright 2026 The QGE Lab Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef QGE_CONFIG_H_
#define QGE_CONFIG_H_

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

// Reproducibility config files:
//
//   # comment
//   [schedule]
//   eps = 0.02
//   method = method-2
//
// Sections are fixed; keys are validated by the caller against its own table.
namespace qge::config {

inline constexpr const char* kSections[] = {"problem", "schedule", "noise", "cost"};

struct Entry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
};

struct ConfigFile {
  std::string source;
  std::vector<Entry> entries;  // file order

  // Value of section.key or nullptr.
  const std::string* Find(const std::string& section, const std::string& key) const;
};

// Throws Error(kConfig) on syntax errors, unknown sections, keys outside a
// section and duplicate keys.
ConfigFile Parse(std::istream& in, const std::string& source = "<config>");
ConfigFile Load(const std::string& path);

}  // namespace qge::config

#endif  // QGE_CONFIG_H_
