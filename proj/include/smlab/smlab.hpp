#pragma once

#include "smlab/assembly.hpp"
#include "smlab/error.hpp"
#include "smlab/geometry.hpp"
#include "smlab/hardy.hpp"
#include "smlab/mesh.hpp"
#include "smlab/params.hpp"
#include "smlab/pencil.hpp"
#include "smlab/perturbation.hpp"
#include "smlab/quadrature.hpp"
#include "smlab/reduction.hpp"
#include "smlab/regression.hpp"
#include "smlab/report.hpp"
#include "smlab/spectral.hpp"
