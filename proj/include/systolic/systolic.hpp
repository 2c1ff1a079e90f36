#pragma once

#include "systolic/census.hpp"
#include "systolic/cli.hpp"
#include "systolic/clifford.hpp"
#include "systolic/congruence.hpp"
#include "systolic/errors.hpp"
#include "systolic/kleinian.hpp"
#include "systolic/quadfield.hpp"
#include "systolic/rational.hpp"
#include "systolic/salem.hpp"
#include "systolic/serialize.hpp"
