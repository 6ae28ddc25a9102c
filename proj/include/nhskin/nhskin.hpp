#pragma once

// Umbrella header. Pulls in every public module except the CLI driver.

#include <nhskin/version.hpp>
#include <nhskin/common.hpp>
#include <nhskin/matrix.hpp>
#include <nhskin/model.hpp>
#include <nhskin/polyroot.hpp>
#include <nhskin/eig.hpp>
#include <nhskin/classify.hpp>
#include <nhskin/skin.hpp>
#include <nhskin/nonbloch.hpp>
#include <nhskin/pointgap.hpp>
#include <nhskin/sweep.hpp>
#include <nhskin/io.hpp>
#include <nhskin/acceptance.hpp>
