#pragma once

#include "gltlab/config.hpp"
#include "gltlab/experiment.hpp"
#include "gltlab/expression.hpp"
#include "gltlab/glt.hpp"
#include "gltlab/ladder.hpp"
#include "gltlab/matrix.hpp"
#include "gltlab/sequence.hpp"
#include "gltlab/symbol.hpp"
#include "gltlab/verify.hpp"
