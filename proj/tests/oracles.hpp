#ifndef CORRFIX_TEST_ORACLES_HPP
#define CORRFIX_TEST_ORACLES_HPP
#endif
