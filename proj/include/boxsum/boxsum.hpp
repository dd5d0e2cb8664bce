#pragma once

#include "boxsum/numeric.hpp"
#include "boxsum/field.hpp"
#include "boxsum/basis.hpp"
#include "boxsum/box.hpp"
#include "boxsum/character.hpp"
#include "boxsum/energy.hpp"
#include "boxsum/lattice.hpp"
#include "boxsum/gamma.hpp"
#include "boxsum/burgess.hpp"
#include "boxsum/survey.hpp"
#include "boxsum/fixtures.hpp"
