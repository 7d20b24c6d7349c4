#pragma once

#include "doctest.h"
#include "macwt/error.hpp"

// Code of the macwt::Error thrown by f; fails the test when nothing is thrown.
template <class F>
macwt::ErrorCode code_of(F&& f)
{
    try {
        f();
    } catch (const macwt::Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return macwt::ErrorCode::IoError;
}
