#pragma once
// All public headers.

#include "ghlab/numverify.hpp"
#include "ghlab/coupling.hpp"
#include "ghlab/gh_ansatz.hpp"
#include "ghlab/classic2d.hpp"
#include "ghlab/taubnut_c3.hpp"
#include "ghlab/positive_vertex.hpp"
#include "ghlab/negative_vertex.hpp"
#include "ghlab/renorm_flow.hpp"
