#pragma once

#include "geoseg/csv.hpp"
#include "geoseg/decay.hpp"
#include "geoseg/error.hpp"
#include "geoseg/geo.hpp"
#include "geoseg/ingest.hpp"
#include "geoseg/io.hpp"
#include "geoseg/network.hpp"
#include "geoseg/nullmodel.hpp"
#include "geoseg/parallel.hpp"
#include "geoseg/pipeline.hpp"
#include "geoseg/random.hpp"
#include "geoseg/segregation.hpp"
#include "geoseg/stats.hpp"
#include "geoseg/synth.hpp"
#include "geoseg/types.hpp"
