#pragma once

#include "checker.hpp"
#include "dsl.hpp"
#include "eventb.hpp"
#include "identifier.hpp"
#include "model.hpp"
#include "relation.hpp"
#include "report.hpp"
#include "semantics.hpp"
#include "trace_io.hpp"
#include "value_range.hpp"
