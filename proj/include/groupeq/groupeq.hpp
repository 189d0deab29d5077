#pragma once

#include "groupeq/commands.hpp"
#include "groupeq/complexes.hpp"
#include "groupeq/cosets.hpp"
#include "groupeq/equations.hpp"
#include "groupeq/groups.hpp"
#include "groupeq/mixedwords.hpp"
#include "groupeq/parser.hpp"
#include "groupeq/solver.hpp"
#include "groupeq/theorems.hpp"
#include "groupeq/words.hpp"
#include "groupeq/zlinalg.hpp"
