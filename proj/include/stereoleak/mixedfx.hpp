// include/stereoleak/mixedfx.hpp

// Copyright 2026 The stereoleak Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef STEREOLEAK_MIXEDFX_HPP_
#define STEREOLEAK_MIXEDFX_HPP_

#include "stereoleak/mixedfx/correlation.hpp"
#include "stereoleak/mixedfx/design.hpp"
#include "stereoleak/mixedfx/lmm.hpp"
#include "stereoleak/mixedfx/ols.hpp"
#include "stereoleak/mixedfx/wald.hpp"

#endif  // STEREOLEAK_MIXEDFX_HPP_
