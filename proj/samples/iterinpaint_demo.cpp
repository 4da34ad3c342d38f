// Copyright 2026 The LayoutLab Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// Walks one layout through IterInpaint step by step, then edits the result
// in an interactive session.
//
//   iterinpaint_demo [OUT_DIR]

#include <iostream>
#include <string>

#include "layoutlab.hpp"

using namespace layoutlab;

int main(int argc, char** argv) {
  const std::string out = argc > 1 ? argv[1] : "iterinpaint_demo_out";
  try {
    const Scene scene = sample_scene(Skill::kNumber, "few", 42);
    const Layout layout = scene.layout();
    std::cout << "layout: " << serialize_reco(layout) << "\n";

    ProceduralBackend backend;
    EngineOptions opts;
    opts.order = Order::kTopToBottom;
    const auto result = generate(layout, backend, opts);
    for (const auto& step : result.trace) {
      std::cout << "step " << step.step_index << ": " << step.prompt << " ("
                << step.mask.popcount() << " px)\n";
    }
    export_trace(result.trace, out + "/trace");
    write_png(out + "/final.png", result.image);

    Session session = make_session(result.image);
    session.objects = layout.regions;
    add_object(session, "cyan metal sphere", {380, 40, 470, 130}, backend);
    if (!layout.regions.empty()) remove_region(session, layout.regions.front().box, backend);
    write_png(out + "/edited.png", session.image);
    undo(session);
    write_png(out + "/undone.png", session.image);
    std::cout << "session objects: " << session.objects.size()
              << ", history depth: " << session.history.size() << "\n";
    std::cout << "wrote " << out << "\n";
  } catch (const std::exception& e) {
    std::cerr << "iterinpaint_demo: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
