#pragma once

// Polar coding over the two-receiver wiretap broadcast channel: region
// arithmetic, set construction, chained encoding/decoding, and exact
// small-instance verification of distribution approximation and leakage.

#include "wtpolar/bits.hpp"
#include "wtpolar/bounds.hpp"
#include "wtpolar/channel.hpp"
#include "wtpolar/codec.hpp"
#include "wtpolar/errors.hpp"
#include "wtpolar/exactverify.hpp"
#include "wtpolar/info.hpp"
#include "wtpolar/keys.hpp"
#include "wtpolar/model.hpp"
#include "wtpolar/outer_plan.hpp"
#include "wtpolar/pipeline.hpp"
#include "wtpolar/plan.hpp"
#include "wtpolar/polar.hpp"
#include "wtpolar/profile.hpp"
#include "wtpolar/rates.hpp"
#include "wtpolar/region.hpp"
#include "wtpolar/rng.hpp"
#include "wtpolar/serialize.hpp"
#include "wtpolar/sets.hpp"
