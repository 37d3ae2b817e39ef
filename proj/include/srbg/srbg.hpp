#pragma once

#include "srbg/demand.hpp"
#include "srbg/equilibrium.hpp"
#include "srbg/feegame.hpp"
#include "srbg/fees.hpp"
#include "srbg/numeric.hpp"
#include "srbg/oracle.hpp"
#include "srbg/outside.hpp"
#include "srbg/payoff.hpp"
#include "srbg/prices.hpp"
#include "srbg/verify.hpp"
