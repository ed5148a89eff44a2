#pragma once

#include "ctxforge/catalog.hpp"
#include "ctxforge/errors.hpp"
#include "ctxforge/expr.hpp"
#include "ctxforge/extension.hpp"
#include "ctxforge/gadget.hpp"
#include "ctxforge/graph.hpp"
#include "ctxforge/inequality.hpp"
#include "ctxforge/invariants.hpp"
#include "ctxforge/io.hpp"
#include "ctxforge/ks.hpp"
#include "ctxforge/linalg.hpp"
#include "ctxforge/pipeline.hpp"
#include "ctxforge/projector_set.hpp"
#include "ctxforge/rational.hpp"
#include "ctxforge/schema.hpp"
#include "ctxforge/sic.hpp"
#include "ctxforge/theta.hpp"
