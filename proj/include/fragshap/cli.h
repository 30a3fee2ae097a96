/*
 * Copyright 2026 The FragShap Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FRAGSHAP_CLI_H_
#define FRAGSHAP_CLI_H_

#include <ostream>

namespace fragshap {

// Entry point of the fragshap tool. Returns 0 on success, 2 on invalid
// arguments or inputs, 1 on runtime failure (including failed verifications).
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace fragshap

#endif  // FRAGSHAP_CLI_H_
