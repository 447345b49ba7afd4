#pragma once

#include <bsbshaper/config.hpp>
#include <bsbshaper/csv.hpp>
#include <bsbshaper/dispersion.hpp>
#include <bsbshaper/errors.hpp>
#include <bsbshaper/fft.hpp>
#include <bsbshaper/ftsi.hpp>
#include <bsbshaper/material_db.hpp>
#include <bsbshaper/metrology.hpp>
#include <bsbshaper/pipeline.hpp>
#include <bsbshaper/pulsefield.hpp>
#include <bsbshaper/shaper.hpp>
#include <bsbshaper/spectral.hpp>
#include <bsbshaper/text_format.hpp>
#include <bsbshaper/units.hpp>
