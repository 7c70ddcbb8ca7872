#pragma once

#include "vwords/error.hpp"
#include "vwords/imaging/image.hpp"
#include "vwords/imaging/colour.hpp"
#include "vwords/imaging/filters.hpp"
#include "vwords/imaging/morphology.hpp"
#include "vwords/imaging/wavelet.hpp"
#include "vwords/imaging/histogram.hpp"
#include "vwords/imaging/resize.hpp"
#include "vwords/imaging/components.hpp"
#include "vwords/face/face_loc.hpp"
#include "vwords/lips/kmeans.hpp"
#include "vwords/lips/lip_loc.hpp"
#include "vwords/features/features.hpp"
#include "vwords/classify/classify.hpp"
#include "vwords/eval/eval.hpp"
#include "vwords/apps/apps.hpp"
#include "vwords/io/text.hpp"
#include "vwords/io/netpbm.hpp"
#include "vwords/io/records.hpp"
#include "vwords/pipeline/pipeline.hpp"
#include "vwords/synth/synth.hpp"
