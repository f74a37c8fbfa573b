#pragma once

#include "matgroupoid/connection.hpp"
#include "matgroupoid/constitutive.hpp"
#include "matgroupoid/errors.hpp"
#include "matgroupoid/finite_group.hpp"
#include "matgroupoid/grid.hpp"
#include "matgroupoid/groupoid.hpp"
#include "matgroupoid/io/body_file.hpp"
#include "matgroupoid/io/field_dump.hpp"
#include "matgroupoid/io/groupoid_file.hpp"
#include "matgroupoid/io/report.hpp"
#include "matgroupoid/iso_solver.hpp"
#include "matgroupoid/levenberg_marquardt.hpp"
#include "matgroupoid/random.hpp"
#include "matgroupoid/tensor.hpp"
#include "matgroupoid/uniformity.hpp"
