#pragma once

// Umbrella header.
#include "sitesel/errors.hpp"
#include "sitesel/geo.hpp"
#include "sitesel/random.hpp"
#include "sitesel/weighting.hpp"
#include "sitesel/clustering.hpp"
#include "sitesel/model_selection.hpp"
#include "sitesel/sites.hpp"
#include "sitesel/survey.hpp"
#include "sitesel/export.hpp"
#include "sitesel/manifest.hpp"
#include "sitesel/synth.hpp"
#include "sitesel/pipeline.hpp"
