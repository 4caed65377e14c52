#pragma once

#include "synthcolon/bvh.hpp"
#include "synthcolon/config.hpp"
#include "synthcolon/dataset.hpp"
#include "synthcolon/errors.hpp"
#include "synthcolon/geometry.hpp"
#include "synthcolon/image.hpp"
#include "synthcolon/mesh.hpp"
#include "synthcolon/mesh_gen.hpp"
#include "synthcolon/metrics.hpp"
#include "synthcolon/obj_io.hpp"
#include "synthcolon/parallel.hpp"
#include "synthcolon/pipeline.hpp"
#include "synthcolon/png_io.hpp"
#include "synthcolon/render.hpp"
#include "synthcolon/rng.hpp"
#include "synthcolon/scene.hpp"
#include "synthcolon/scene_builder.hpp"
#include "synthcolon/vec.hpp"
