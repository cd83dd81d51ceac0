// Copyright 2026 The otrobust Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef OTROBUST_IO_HPP_
#define OTROBUST_IO_HPP_

#include <string>
#include <vector>

#include "otrobust/liouville.hpp"

namespace otrobust {

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
void ensure_directory(const std::string& path);

// 64-bit FNV-1a, as 16 hex digits.
std::string fnv1a_hex(const std::string& data);

// Snapshot CSV columns: t,id,theta_deg,V,alpha_deg,q_dps[,m,xcg,Jyy],phi,gamma,diverged
// State blocks are F-16 states in rad internally.
std::string snapshot_csv_header(bool with_params);
std::string snapshot_csv_rows(const EnsembleSnapshot& snap);
void write_snapshot_csv(const std::string& path, const EnsembleSnapshot& snap);
void write_snapshots_long_csv(const std::string& path,
                              const std::vector<EnsembleSnapshot>& snaps);
// Groups rows by t, in order of first appearance.
std::vector<EnsembleSnapshot> read_snapshot_csv(const std::string& path);

}  // namespace otrobust

#endif  // OTROBUST_IO_HPP_
