#pragma once

#include "floodpulse/config.hpp"
#include "floodpulse/dates.hpp"
#include "floodpulse/detect.hpp"
#include "floodpulse/errors.hpp"
#include "floodpulse/geo.hpp"
#include "floodpulse/io.hpp"
#include "floodpulse/netdyn.hpp"
#include "floodpulse/pipeline.hpp"
#include "floodpulse/presence.hpp"
#include "floodpulse/rainfall.hpp"
#include "floodpulse/rng.hpp"
#include "floodpulse/scenario.hpp"
#include "floodpulse/social.hpp"
#include "floodpulse/text.hpp"
