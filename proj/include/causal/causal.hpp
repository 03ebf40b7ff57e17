#pragma once

// Everything at once.

#include "causal/ast.hpp"
#include "causal/asp.hpp"
#include "causal/error.hpp"
#include "causal/fuzz.hpp"
#include "causal/grounder.hpp"
#include "causal/interpretation.hpp"
#include "causal/normalizer.hpp"
#include "causal/parser.hpp"
#include "causal/semantics.hpp"
#include "causal/translator.hpp"
