#pragma once

#include "liftfinsler/errors.hpp"
#include "liftfinsler/tolerances.hpp"
#include "liftfinsler/validation.hpp"
#include "liftfinsler/lie_core.hpp"
#include "liftfinsler/riem_connection.hpp"
#include "liftfinsler/tangent_lift.hpp"
#include "liftfinsler/phi_family.hpp"
#include "liftfinsler/finsler_metrics.hpp"
#include "liftfinsler/flag_curvature.hpp"
#include "liftfinsler/instance.hpp"
#include "liftfinsler/report.hpp"
#include "liftfinsler/presets.hpp"
