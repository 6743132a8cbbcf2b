#pragma once

#include "patparse/axis.hpp"
#include "patparse/axis_db.hpp"
#include "patparse/config.hpp"
#include "patparse/corpus.hpp"
#include "patparse/error.hpp"
#include "patparse/eval.hpp"
#include "patparse/joint.hpp"
#include "patparse/oracle.hpp"
#include "patparse/parser.hpp"
#include "patparse/synth.hpp"
#include "patparse/tagset.hpp"
