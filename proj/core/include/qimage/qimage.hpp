#pragma once

#include "qimage/bdg.hpp"
#include "qimage/errors.hpp"
#include "qimage/fisher_report.hpp"
#include "qimage/imagestats.hpp"
#include "qimage/inference.hpp"
#include "qimage/io.hpp"
#include "qimage/meanfield_fisher.hpp"
#include "qimage/numerics.hpp"
#include "qimage/parallel.hpp"
#include "qimage/pixel_grid.hpp"
#include "qimage/profiles.hpp"
#include "qimage/simulate.hpp"
#include "qimage/units.hpp"
