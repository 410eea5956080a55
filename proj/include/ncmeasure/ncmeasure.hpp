#pragma once

#include "ncmeasure/circle_measure.hpp"
#include "ncmeasure/classical.hpp"
#include "ncmeasure/concurrency.hpp"
#include "ncmeasure/decompose.hpp"
#include "ncmeasure/errors.hpp"
#include "ncmeasure/gns.hpp"
#include "ncmeasure/linalg.hpp"
#include "ncmeasure/measures.hpp"
#include "ncmeasure/transforms.hpp"
#include "ncmeasure/version.hpp"
#include "ncmeasure/words.hpp"
