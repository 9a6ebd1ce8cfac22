#pragma once

#include "edgekit/benchmark.hpp"
#include "edgekit/canny.hpp"
#include "edgekit/dataset.hpp"
#include "edgekit/edge_pipeline.hpp"
#include "edgekit/error.hpp"
#include "edgekit/evaluation.hpp"
#include "edgekit/filtering.hpp"
#include "edgekit/image.hpp"
#include "edgekit/io.hpp"
#include "edgekit/kernels.hpp"
#include "edgekit/manifest.hpp"
#include "edgekit/parallel.hpp"
