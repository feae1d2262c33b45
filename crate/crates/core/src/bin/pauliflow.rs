// Copyright 2026 The pauliflow Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

//! `pauliflow` command-line entry point. Logging is controlled by `PAULIFLOW_LOG`.

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("PAULIFLOW_LOG", "warn")).init();
    std::process::exit(pauliflow::cli::run(std::env::args_os()));
}
