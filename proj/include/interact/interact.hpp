#pragma once
// Everything except the command-line layer.

#include "fdstar.hpp"
#include "posmap.hpp"
#include "interaction.hpp"
#include "basicc.hpp"
#include "bimodule.hpp"
#include "covrep.hpp"
#include "gencorr.hpp"
