#pragma once

#include "lyap/certificate.hpp"
#include "lyap/error.hpp"
#include "lyap/io.hpp"
#include "lyap/lyapunov.hpp"
#include "lyap/methods.hpp"
#include "lyap/problems.hpp"
#include "lyap/scenario.hpp"
#include "lyap/spectral.hpp"
#include "lyap/symmetric_eigen.hpp"
#include "lyap/trace.hpp"
